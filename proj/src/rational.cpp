#include "mdnet/rational.hpp"

#include <cctype>

#include "mdnet/error.hpp"

namespace mdnet {

std::string to_fraction_string(const Rational& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text)
{
    auto valid_int = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+'))
            s.remove_prefix(1);
        if (s.empty())
            return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                return false;
        return true;
    };
    const auto slash = text.find('/');
    std::string num(text.substr(0, slash));
    std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
    if (!num.empty() && num.front() == '+')
        num.erase(0, 1);
    if (!valid_int(num) || !valid_int(den) || den.front() == '-' || den.front() == '+')
        throw ParseError("invalid rational '" + std::string(text) + "'");
    Integer n(num, 10);
    Integer d(den, 10);
    if (d == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

} // namespace mdnet
