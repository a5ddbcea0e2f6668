#include "mdnet/bell_functionals.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>

#include "mdnet/error.hpp"

namespace mdnet {

namespace {

std::size_t cells(const std::vector<VariableSpec>& vars)
{
    std::size_t n = 1;
    for (const auto& v : vars) {
        if (v.cardinality < 1)
            throw ArgumentError("cardinality of '" + v.name + "' must be positive");
        n *= static_cast<std::size_t>(v.cardinality);
        if (n > (std::size_t{1} << 26))
            throw CapacityError("behavior table too large");
    }
    return n;
}

std::size_t flat_of(const std::vector<VariableSpec>& vars, std::span<const int> values)
{
    if (values.size() != vars.size())
        throw ArgumentError("assignment has the wrong number of values");
    std::size_t f = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (values[i] < 0 || values[i] >= vars[i].cardinality)
            throw ArgumentError("value out of range for '" + vars[i].name + "'");
        f = f * static_cast<std::size_t>(vars[i].cardinality) + static_cast<std::size_t>(values[i]);
    }
    return f;
}

std::vector<int> unflat(const std::vector<VariableSpec>& vars, std::size_t flat)
{
    std::vector<int> v(vars.size());
    for (std::size_t i = vars.size(); i-- > 0;) {
        v[i] = static_cast<int>(flat % static_cast<std::size_t>(vars[i].cardinality));
        flat /= static_cast<std::size_t>(vars[i].cardinality);
    }
    return v;
}

void require_binary_outputs(const Behavior& b)
{
    for (const auto& o : b.outputs())
        if (o.cardinality != 2)
            throw ArgumentError("correlators need binary outputs ('" + o.name + "' is not)");
}

void require_shape(const Behavior& b, std::size_t n_in, int in_card, std::size_t n_out, int out_card,
                   const char* what)
{
    bool ok = b.inputs().size() == n_in && b.outputs().size() == n_out;
    for (const auto& v : b.inputs())
        ok = ok && v.cardinality == in_card;
    for (const auto& v : b.outputs())
        ok = ok && v.cardinality == out_card;
    if (!ok)
        throw ArgumentError(std::string(what) + " needs " + std::to_string(n_in) + " inputs of cardinality " +
                            std::to_string(in_card) + " and " + std::to_string(n_out) +
                            " outputs of cardinality " + std::to_string(out_card));
}

} // namespace

Behavior::Behavior(std::vector<VariableSpec> inputs, std::vector<VariableSpec> outputs, std::vector<double> table,
                   std::optional<std::vector<double>> input_distribution, std::vector<Party> parties)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), table_(std::move(table)),
      input_dist_(std::move(input_distribution)), parties_(std::move(parties))
{
    std::set<std::string> names;
    for (const auto* group : {&inputs_, &outputs_})
        for (const auto& v : *group)
            if (v.name.empty() || !names.insert(v.name).second)
                throw ArgumentError("behavior variable names must be nonempty and unique");
    if (outputs_.empty())
        throw ArgumentError("behavior needs at least one output");
    n_in_ = cells(inputs_);
    n_out_ = cells(outputs_);
    if (table_.size() != n_in_ * n_out_)
        throw ArgumentError("behavior table has " + std::to_string(table_.size()) + " entries, expected " +
                            std::to_string(n_in_ * n_out_));
    for (std::size_t x = 0; x < n_in_; ++x) {
        double s = 0.0;
        for (std::size_t a = 0; a < n_out_; ++a) {
            const double p = table_[x * n_out_ + a];
            if (!(p >= 0.0) || !std::isfinite(p))
                throw ArgumentError("behavior entries must be finite and nonnegative");
            s += p;
        }
        if (std::abs(s - 1.0) > kNormTolerance)
            throw ArgumentError("conditional slice " + std::to_string(x) + " sums to " + std::to_string(s));
    }
    if (input_dist_) {
        if (input_dist_->size() != n_in_)
            throw ArgumentError("input distribution has the wrong length");
        double s = 0.0;
        for (double p : *input_dist_) {
            if (!(p >= 0.0) || !std::isfinite(p))
                throw ArgumentError("input distribution entries must be finite and nonnegative");
            s += p;
        }
        if (std::abs(s - 1.0) > kNormTolerance)
            throw ArgumentError("input distribution does not sum to 1");
    }
    if (parties_.empty() && inputs_.size() == outputs_.size()) {
        for (std::size_t i = 0; i < inputs_.size(); ++i)
            parties_.push_back({{i}, {i}});
    }
    if (!parties_.empty()) {
        std::vector<int> seen_in(inputs_.size(), 0);
        std::vector<int> seen_out(outputs_.size(), 0);
        for (const auto& p : parties_) {
            for (auto i : p.inputs) {
                if (i >= inputs_.size())
                    throw ArgumentError("party refers to a missing input");
                ++seen_in[i];
            }
            for (auto o : p.outputs) {
                if (o >= outputs_.size())
                    throw ArgumentError("party refers to a missing output");
                ++seen_out[o];
            }
        }
        if (std::any_of(seen_in.begin(), seen_in.end(), [](int c) { return c != 1; }) ||
            std::any_of(seen_out.begin(), seen_out.end(), [](int c) { return c != 1; }))
            throw ArgumentError("parties must partition the inputs and outputs");
    }
}

std::size_t Behavior::input_index(std::span<const int> x) const { return flat_of(inputs_, x); }
std::size_t Behavior::output_index(std::span<const int> a) const { return flat_of(outputs_, a); }
std::vector<int> Behavior::input_values(std::size_t flat) const { return unflat(inputs_, flat); }
std::vector<int> Behavior::output_values(std::size_t flat) const { return unflat(outputs_, flat); }

double Behavior::prob(std::span<const int> outputs, std::span<const int> inputs) const
{
    return prob_flat(output_index(outputs), input_index(inputs));
}

Distribution Behavior::joint() const
{
    std::vector<VariableSpec> vars = inputs_;
    vars.insert(vars.end(), outputs_.begin(), outputs_.end());
    std::vector<double> t(table_.size());
    for (std::size_t x = 0; x < n_in_; ++x) {
        const double px = input_dist_ ? (*input_dist_)[x] : 1.0 / static_cast<double>(n_in_);
        for (std::size_t a = 0; a < n_out_; ++a)
            t[x * n_out_ + a] = px * table_[x * n_out_ + a];
    }
    return Distribution(std::move(vars), std::move(t));
}

Behavior behavior_from_distribution(const Distribution& dist, const VarSet& inputs, const VarSet& outputs,
                                    std::vector<Party> parties)
{
    VarSet order = inputs;
    order.insert(order.end(), outputs.begin(), outputs.end());
    const Distribution m = reorder(marginal(dist, order), order);
    std::vector<VariableSpec> in_specs(m.variables().begin(), m.variables().begin() + inputs.size());
    std::vector<VariableSpec> out_specs(m.variables().begin() + inputs.size(), m.variables().end());
    const std::size_t n_in = cells(in_specs);
    const std::size_t n_out = cells(out_specs);
    std::vector<double> table(m.table().begin(), m.table().end());
    std::vector<double> px(n_in, 0.0);
    for (std::size_t x = 0; x < n_in; ++x) {
        double s = 0.0;
        for (std::size_t a = 0; a < n_out; ++a)
            s += table[x * n_out + a];
        if (s <= 0.0)
            throw DegenerateEventError("input assignment " + std::to_string(x) + " has probability zero");
        px[x] = s;
        for (std::size_t a = 0; a < n_out; ++a)
            table[x * n_out + a] /= s;
    }
    return Behavior(std::move(in_specs), std::move(out_specs), std::move(table), std::move(px), std::move(parties));
}

NoSignalingResult is_no_signaling(const Behavior& b, double tol)
{
    const auto& parties = b.parties();
    if (parties.empty())
        throw ArgumentError("no-signaling check needs party assignments");
    const std::size_t np = parties.size();
    if (np > 16)
        throw CapacityError("too many parties for the no-signaling check");
    NoSignalingResult res;
    for (std::uint32_t subset = 1; subset + 1 < (std::uint32_t{1} << np); ++subset) {
        std::vector<std::size_t> out_pos;
        std::vector<std::size_t> in_pos;
        for (std::size_t p = 0; p < np; ++p) {
            if (!(subset >> p & 1U))
                continue;
            out_pos.insert(out_pos.end(), parties[p].outputs.begin(), parties[p].outputs.end());
            in_pos.insert(in_pos.end(), parties[p].inputs.begin(), parties[p].inputs.end());
        }
        if (out_pos.empty())
            continue;
        // reference marginal per assignment of the subset's own inputs
        std::map<std::vector<int>, std::vector<double>> reference;
        for (std::size_t x = 0; x < b.num_input_cells(); ++x) {
            const auto xv = b.input_values(x);
            std::vector<int> key;
            for (auto i : in_pos)
                key.push_back(xv[i]);
            std::map<std::vector<int>, double> marg;
            for (std::size_t a = 0; a < b.num_output_cells(); ++a) {
                const auto av = b.output_values(a);
                std::vector<int> k;
                for (auto o : out_pos)
                    k.push_back(av[o]);
                marg[k] += b.prob_flat(a, x);
            }
            std::vector<double> vec;
            for (const auto& [k, v] : marg)
                vec.push_back(v);
            auto [it, inserted] = reference.emplace(key, vec);
            if (!inserted)
                for (std::size_t i = 0; i < vec.size(); ++i)
                    res.worst_violation = std::max(res.worst_violation, std::abs(vec[i] - it->second[i]));
        }
    }
    res.ok = res.worst_violation <= tol;
    return res;
}

double correlator(const Behavior& b, std::span<const int> inputs)
{
    require_binary_outputs(b);
    const std::size_t x = b.input_index(inputs);
    double e = 0.0;
    for (std::size_t a = 0; a < b.num_output_cells(); ++a) {
        const int parity = std::popcount(a) & 1;
        e += (parity ? -1.0 : 1.0) * b.prob_flat(a, x);
    }
    return e;
}

double correlator(const Behavior& b, std::initializer_list<int> inputs)
{
    return correlator(b, std::span<const int>(inputs.begin(), inputs.size()));
}

double chsh(const Behavior& b)
{
    require_shape(b, 2, 2, 2, 2, "CHSH");
    return correlator(b, {0, 0}) + correlator(b, {0, 1}) + correlator(b, {1, 0}) - correlator(b, {1, 1});
}

double cglmp(const Behavior& b, int d)
{
    if (d < 2)
        throw ArgumentError("CGLMP needs d >= 2");
    require_shape(b, 2, 2, 2, d, "CGLMP");
    auto mod = [d](int v) { return ((v % d) + d) % d; };
    // P(A_x = B_y + c) := sum_j p(a = j, b = j + c | x, y)
    auto pab = [&](int x, int y, int c) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            const int v[2] = {j, mod(j + c)};
            const int in[2] = {x, y};
            s += b.prob(v, in);
        }
        return s;
    };
    // P(B_y = A_x + c) := sum_j p(b = j, a = j + c | x, y)
    auto pba = [&](int y, int x, int c) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            const int v[2] = {mod(j + c), j};
            const int in[2] = {x, y};
            s += b.prob(v, in);
        }
        return s;
    };
    double total = 0.0;
    const int kmax = (d + 1) / 2;
    for (int k = 0; k < kmax; ++k) {
        const double w = 1.0 - 2.0 * k / (d - 1);
        const double plus = pab(0, 0, k) + pba(0, 1, k + 1) + pab(1, 1, k) + pba(1, 0, k);
        const double minus = pab(0, 0, -k - 1) + pba(0, 1, -k) + pab(1, 1, -k - 1) + pba(1, 0, -k - 1);
        total += w * (plus - minus);
    }
    return total;
}

double mermin(const Behavior& b)
{
    require_shape(b, 3, 2, 3, 2, "Mermin");
    return correlator(b, {0, 0, 1}) + correlator(b, {0, 1, 0}) + correlator(b, {1, 0, 0}) - correlator(b, {1, 1, 1});
}

BilocalityValue chain_nlocality_terms(const Behavior& b, int n, MiddleMode mode)
{
    if (n < 1)
        throw ArgumentError("chain needs n >= 1");
    const auto& outs = b.outputs();
    const auto& ins = b.inputs();
    if (outs.size() != static_cast<std::size_t>(n) + 1 || ins.size() != 2)
        throw ArgumentError("chain scenario needs n+1 outputs and 2 inputs");
    for (const auto& v : ins)
        if (v.cardinality != 2)
            throw ArgumentError("chain endpoints need binary inputs");
    if (outs.front().cardinality != 2 || outs.back().cardinality != 2)
        throw ArgumentError("chain endpoints need binary outputs");
    std::vector<bool> split(outs.size(), false);
    for (std::size_t i = 1; i + 1 < outs.size(); ++i) {
        const int c = outs[i].cardinality;
        bool s = false;
        if (mode == MiddleMode::SingleBit)
            s = false;
        else if (mode == MiddleMode::SplitBit)
            s = true;
        else
            s = c == 4;
        if ((s && c != 4) || (!s && c != 2))
            throw ArgumentError("middle output '" + outs[i].name + "' has the wrong cardinality for its mode");
        split[i] = s;
    }
    // sign of the product for the I (bit 0) and J (bit 1) readings
    auto sign = [&](const std::vector<int>& a, int which) {
        int parity = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            int bit = a[i];
            if (split[i])
                bit = which == 0 ? (a[i] >> 1) & 1 : a[i] & 1;
            parity ^= bit;
        }
        return parity ? -1.0 : 1.0;
    };
    BilocalityValue r;
    for (int x1 = 0; x1 < 2; ++x1) {
        for (int x3 = 0; x3 < 2; ++x3) {
            const int in[2] = {x1, x3};
            const std::size_t xi = b.input_index(in);
            double ei = 0.0;
            double ej = 0.0;
            for (std::size_t a = 0; a < b.num_output_cells(); ++a) {
                const double p = b.prob_flat(a, xi);
                if (p == 0.0)
                    continue;
                const auto av = b.output_values(a);
                ei += sign(av, 0) * p;
                ej += sign(av, 1) * p;
            }
            r.I += ei;
            r.J += ((x1 + x3) % 2 ? -1.0 : 1.0) * ej;
        }
    }
    // the square root magnifies rounding residue near zero, so clear it first
    constexpr double kResidue = 1e-13;
    if (std::abs(r.I) < kResidue)
        r.I = 0.0;
    if (std::abs(r.J) < kResidue)
        r.J = 0.0;
    r.value = std::sqrt(std::abs(r.I)) + std::sqrt(std::abs(r.J));
    return r;
}

BilocalityValue bilocality(const Behavior& b, MiddleMode mode) { return chain_nlocality_terms(b, 2, mode); }

double chain_nlocality(const Behavior& b, int n, MiddleMode mode) { return chain_nlocality_terms(b, n, mode).value; }

Behavior pr_box()
{
    std::vector<double> t(16, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if ((a ^ b) == (x & y))
                        t[static_cast<std::size_t>((x * 2 + y) * 4 + a * 2 + b)] = 0.5;
    return Behavior({{"x", 2}, {"y", 2}}, {{"a", 2}, {"b", 2}}, std::move(t));
}

} // namespace mdnet
