#include "mdnet/cone.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mdnet/error.hpp"

namespace mdnet {

EntropySpace::EntropySpace(VarSet variables, std::vector<std::string> auxiliary)
    : vars_(std::move(variables)), aux_(std::move(auxiliary))
{
    if (vars_.size() > kMaxVariables)
        throw CapacityError("entropy space supports at most 12 variables");
    std::set<std::string> seen;
    for (const auto& v : vars_) {
        if (v.empty() || v.find(',') != std::string::npos)
            throw ArgumentError("invalid entropy variable name '" + v + "'");
        if (!seen.insert(v).second)
            throw ArgumentError("duplicate entropy variable '" + v + "'");
    }
    for (const auto& a : aux_) {
        if (a.empty() || a.find(',') != std::string::npos)
            throw ArgumentError("invalid auxiliary coordinate name '" + a + "'");
        if (!seen.insert(a).second)
            throw ArgumentError("auxiliary coordinate '" + a + "' clashes with another name");
    }
}

std::uint64_t EntropySpace::mask_of(const VarSet& names) const
{
    std::uint64_t mask = 0;
    for (const auto& n : names) {
        auto it = std::find(vars_.begin(), vars_.end(), n);
        if (it == vars_.end())
            throw NameError("unknown entropy variable '" + n + "'");
        mask |= std::uint64_t{1} << (it - vars_.begin());
    }
    return mask;
}

std::size_t EntropySpace::coordinate(std::uint64_t mask) const
{
    if (mask == 0 || mask > num_subset_coordinates())
        throw ArgumentError("subset mask out of range");
    return static_cast<std::size_t>(mask - 1);
}

std::size_t EntropySpace::aux_coordinate(const std::string& name) const
{
    auto it = std::find(aux_.begin(), aux_.end(), name);
    if (it == aux_.end())
        throw NameError("unknown auxiliary coordinate '" + name + "'");
    return num_subset_coordinates() + static_cast<std::size_t>(it - aux_.begin());
}

std::string EntropySpace::key(std::size_t coord) const
{
    if (coord >= dim())
        throw ArgumentError("coordinate out of range");
    if (is_aux(coord))
        return aux_[coord - num_subset_coordinates()];
    const auto mask = mask_at(coord);
    VarSet names;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (mask >> i & 1U)
            names.push_back(vars_[i]);
    std::sort(names.begin(), names.end());
    std::string out;
    for (const auto& n : names) {
        if (!out.empty())
            out += ',';
        out += n;
    }
    return out;
}

std::size_t EntropySpace::coordinate_from_key(const std::string& key) const
{
    if (std::find(aux_.begin(), aux_.end(), key) != aux_.end())
        return aux_coordinate(key);
    VarSet names;
    std::stringstream ss(key);
    std::string item;
    while (std::getline(ss, item, ','))
        names.push_back(item);
    if (names.empty())
        throw NameError("empty coordinate key");
    return coordinate(mask_of(names));
}

bool LinForm::is_zero() const { return is_constant() && constant == 0; }

bool LinForm::is_constant() const
{
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& c) { return c == 0; });
}

LinForm& LinForm::add_term(std::size_t coord, const Rational& c)
{
    coeffs.at(coord) += c;
    return *this;
}

LinForm& LinForm::operator+=(const LinForm& other)
{
    if (other.dim() != dim())
        throw ArgumentError("linear forms of different dimension");
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        coeffs[i] += other.coeffs[i];
    constant += other.constant;
    return *this;
}

LinForm& LinForm::operator-=(const LinForm& other)
{
    if (other.dim() != dim())
        throw ArgumentError("linear forms of different dimension");
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        coeffs[i] -= other.coeffs[i];
    constant -= other.constant;
    return *this;
}

LinForm& LinForm::operator*=(const Rational& s)
{
    for (auto& c : coeffs)
        c *= s;
    constant *= s;
    return *this;
}

LinForm LinForm::operator-() const
{
    LinForm out = *this;
    out *= Rational(-1);
    return out;
}

Rational LinForm::evaluate(const std::vector<Rational>& point) const
{
    Rational v = constant;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0)
            v += coeffs[i] * point.at(i);
    return v;
}

double LinForm::evaluate(const std::vector<double>& point) const
{
    double v = constant.get_d();
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != 0)
            v += coeffs[i].get_d() * point.at(i);
    return v;
}

LinForm canonical(LinForm f, bool fix_sign)
{
    Integer l = 1;
    Integer g = 0;
    auto visit = [&](const Rational& c) {
        if (c == 0)
            return;
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    };
    for (const auto& c : f.coeffs)
        visit(c);
    visit(f.constant);
    auto gather = [&](const Rational& c) {
        if (c == 0)
            return;
        Integer n = c.get_num() * (l / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    };
    for (const auto& c : f.coeffs)
        gather(c);
    gather(f.constant);
    if (g == 0)
        return f; // all zero
    Rational scale(l, g);
    scale.canonicalize();
    if (fix_sign) {
        for (const auto& c : f.coeffs) {
            if (c != 0) {
                if (c < 0)
                    scale = -scale;
                break;
            }
        }
    }
    f *= scale;
    return f;
}

bool linform_less(const LinForm& a, const LinForm& b)
{
    if (a.dim() != b.dim())
        return a.dim() < b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        if (a.coeffs[i] != b.coeffs[i])
            return a.coeffs[i] < b.coeffs[i];
    }
    return a.constant < b.constant;
}

LinForm EntropyExpr::H(const EntropySpace& s, std::uint64_t mask)
{
    LinForm f(s.dim());
    if (mask != 0)
        f.coeffs[s.coordinate(mask)] = 1;
    return f;
}

LinForm EntropyExpr::H(const EntropySpace& s, const VarSet& set) { return H(s, s.mask_of(set)); }

LinForm EntropyExpr::cond_H(const EntropySpace& s, const VarSet& a, const VarSet& given)
{
    const auto ma = s.mask_of(a);
    const auto mc = s.mask_of(given);
    return H(s, ma | mc) - H(s, mc);
}

LinForm EntropyExpr::I(const EntropySpace& s, const VarSet& a, const VarSet& b) { return cmi(s, a, b, {}); }

LinForm EntropyExpr::cmi(const EntropySpace& s, std::uint64_t a, std::uint64_t b, std::uint64_t given)
{
    if ((a & b) || (a & given) || (b & given))
        throw ArgumentError("conditional mutual information needs disjoint sets");
    return H(s, a | given) + H(s, b | given) - H(s, a | b | given) - H(s, given);
}

LinForm EntropyExpr::cmi(const EntropySpace& s, const VarSet& a, const VarSet& b, const VarSet& given)
{
    return cmi(s, s.mask_of(a), s.mask_of(b), s.mask_of(given));
}

LinForm EntropyExpr::I3(const EntropySpace& s, const VarSet& a, const VarSet& b, const VarSet& c)
{
    const auto ma = s.mask_of(a);
    const auto mb = s.mask_of(b);
    const auto mc = s.mask_of(c);
    if ((ma & mb) || (ma & mc) || (mb & mc))
        throw ArgumentError("tripartite information needs disjoint sets");
    return H(s, ma | mb | mc) - H(s, ma | mb) - H(s, ma | mc) - H(s, mb | mc) + H(s, ma) + H(s, mb) + H(s, mc);
}

LinForm EntropyExpr::aux(const EntropySpace& s, const std::string& name)
{
    LinForm f(s.dim());
    f.coeffs[s.aux_coordinate(name)] = 1;
    return f;
}

bool Cone::add_inequality(const LinForm& f)
{
    if (f.dim() != space_.dim())
        throw ArgumentError("inequality dimension does not match the cone");
    LinForm c = canonical(f, false);
    if (c.is_constant() && c.constant >= 0)
        return false;
    if (std::find(ineqs_.begin(), ineqs_.end(), c) != ineqs_.end())
        return false;
    ineqs_.push_back(std::move(c));
    return true;
}

bool Cone::add_equality(const LinForm& f)
{
    if (f.dim() != space_.dim())
        throw ArgumentError("equality dimension does not match the cone");
    LinForm c = canonical(f, true);
    if (c.is_zero())
        return false;
    if (std::find(eqs_.begin(), eqs_.end(), c) != eqs_.end())
        return false;
    eqs_.push_back(std::move(c));
    return true;
}

void Cone::set_inequalities(std::vector<LinForm> forms)
{
    ineqs_.clear();
    std::set<const LinForm*, bool (*)(const LinForm*, const LinForm*)> seen(
        [](const LinForm* a, const LinForm* b) { return linform_less(*a, *b); });
    std::vector<LinForm> kept;
    kept.reserve(forms.size());
    for (auto& f : forms) {
        if (f.dim() != space_.dim())
            throw ArgumentError("inequality dimension does not match the cone");
        LinForm c = canonical(std::move(f), false);
        if (c.is_constant() && c.constant >= 0)
            continue;
        kept.push_back(std::move(c));
    }
    ineqs_.reserve(kept.size());
    for (auto& c : kept) {
        if (seen.count(&c))
            continue;
        seen.insert(&c);
        ineqs_.push_back(c);
    }
}

void Cone::set_equalities(std::vector<LinForm> forms)
{
    eqs_.clear();
    for (auto& f : forms)
        add_equality(f);
}

double Cone::max_violation(const std::vector<double>& point) const
{
    double worst = 0.0;
    for (const auto& f : ineqs_)
        worst = std::max(worst, -f.evaluate(point));
    for (const auto& f : eqs_)
        worst = std::max(worst, std::abs(f.evaluate(point)));
    return worst;
}

std::vector<double> entropy_point(const EntropySpace& space, const Distribution& dist)
{
    std::vector<double> point(space.dim(), 0.0);
    std::vector<std::size_t> pos;
    for (const auto& v : space.variables())
        pos.push_back(dist.index_of(v));
    for (std::size_t c = 0; c < space.num_subset_coordinates(); ++c) {
        const auto mask = space.mask_at(c);
        std::uint64_t dmask = 0;
        for (std::size_t i = 0; i < pos.size(); ++i)
            if (mask >> i & 1U)
                dmask |= std::uint64_t{1} << pos[i];
        point[c] = dist.entropy_of_mask(dmask);
    }
    return point;
}

} // namespace mdnet
