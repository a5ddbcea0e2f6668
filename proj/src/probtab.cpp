#include "mdnet/probtab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "mdnet/error.hpp"

namespace mdnet {

namespace {

constexpr std::size_t kMaxTableSize = std::size_t{1} << 26;

std::vector<std::size_t> make_strides(const std::vector<VariableSpec>& vars)
{
    std::vector<std::size_t> strides(vars.size(), 1);
    for (std::size_t i = vars.size(); i-- > 1;)
        strides[i - 1] = strides[i] * static_cast<std::size_t>(vars[i].cardinality);
    return strides;
}

std::size_t product_of_cardinalities(const std::vector<VariableSpec>& vars)
{
    std::size_t n = 1;
    for (const auto& v : vars) {
        n *= static_cast<std::size_t>(v.cardinality);
        if (n > kMaxTableSize)
            throw CapacityError("distribution table exceeds 2^26 entries");
    }
    return n;
}

void require_disjoint(std::initializer_list<std::uint64_t> masks)
{
    std::uint64_t seen = 0;
    for (auto m : masks) {
        if (seen & m)
            throw ArgumentError("variable sets must be pairwise disjoint");
        seen |= m;
    }
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

} // namespace

Distribution::Distribution(std::vector<VariableSpec> variables, std::vector<double> table)
    : variables_(std::move(variables)), table_(std::move(table))
{
    std::set<std::string> seen;
    for (const auto& v : variables_) {
        if (v.name.empty())
            throw ArgumentError("variable name must be nonempty");
        if (v.cardinality < 1)
            throw ArgumentError("variable '" + v.name + "' must have cardinality >= 1");
        if (!seen.insert(v.name).second)
            throw ArgumentError("duplicate variable name '" + v.name + "'");
    }
    if (variables_.size() > 63)
        throw CapacityError("at most 63 variables are supported");
    if (table_.size() != product_of_cardinalities(variables_))
        throw ArgumentError("table length " + std::to_string(table_.size()) +
                            " does not match the product of cardinalities");
    double total = 0.0;
    for (double p : table_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw ArgumentError("probabilities must be finite and nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > kNormTolerance)
        throw ArgumentError("probabilities sum to " + std::to_string(total) + ", expected 1");
    strides_ = make_strides(variables_);
}

Distribution Distribution::uniform(std::vector<VariableSpec> variables)
{
    const std::size_t n = product_of_cardinalities(variables);
    return Distribution(std::move(variables), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(std::vector<VariableSpec> variables, std::span<const int> values)
{
    if (values.size() != variables.size())
        throw ArgumentError("point mass needs one value per variable");
    std::vector<double> table(product_of_cardinalities(variables), 0.0);
    std::size_t flat = 0;
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (values[i] < 0 || values[i] >= variables[i].cardinality)
            throw ArgumentError("point mass value out of range for '" + variables[i].name + "'");
        flat = flat * static_cast<std::size_t>(variables[i].cardinality) + static_cast<std::size_t>(values[i]);
    }
    table[flat] = 1.0;
    return Distribution(std::move(variables), std::move(table));
}

bool Distribution::has(std::string_view name) const
{
    return std::any_of(variables_.begin(), variables_.end(),
                       [&](const VariableSpec& v) { return v.name == name; });
}

std::size_t Distribution::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name == name)
            return i;
    throw NameError("unknown variable '" + std::string(name) + "'");
}

std::uint64_t Distribution::mask_of(const VarSet& names) const
{
    std::uint64_t mask = 0;
    for (const auto& n : names)
        mask |= std::uint64_t{1} << index_of(n);
    return mask;
}

VarSet Distribution::names() const
{
    VarSet out;
    for (const auto& v : variables_)
        out.push_back(v.name);
    return out;
}

std::size_t Distribution::flat_index(std::span<const int> assignment) const
{
    if (assignment.size() != variables_.size())
        throw ArgumentError("assignment length does not match variable count");
    std::size_t flat = 0;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (assignment[i] < 0 || assignment[i] >= variables_[i].cardinality)
            throw ArgumentError("value out of range for '" + variables_[i].name + "'");
        flat += static_cast<std::size_t>(assignment[i]) * strides_[i];
    }
    return flat;
}

double Distribution::prob(std::span<const int> assignment) const { return table_[flat_index(assignment)]; }

std::vector<int> Distribution::unravel(std::size_t flat) const
{
    std::vector<int> out(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        out[i] = static_cast<int>(flat / strides_[i]);
        flat %= strides_[i];
    }
    return out;
}

std::vector<double> Distribution::marginal_table(std::uint64_t mask) const
{
    const std::size_t n = variables_.size();
    // stride of each kept variable inside the marginal table
    std::vector<std::size_t> mstride(n, 0);
    std::size_t msize = 1;
    for (std::size_t i = n; i-- > 0;) {
        if (mask >> i & 1U) {
            mstride[i] = msize;
            msize *= static_cast<std::size_t>(variables_[i].cardinality);
        }
    }
    std::vector<double> out(msize, 0.0);
    std::vector<int> digit(n, 0);
    std::size_t midx = 0;
    for (std::size_t flat = 0; flat < table_.size(); ++flat) {
        out[midx] += table_[flat];
        // odometer increment, last variable fastest
        for (std::size_t i = n; i-- > 0;) {
            if (++digit[i] < variables_[i].cardinality) {
                midx += mstride[i];
                break;
            }
            midx -= mstride[i] * static_cast<std::size_t>(digit[i] - 1);
            digit[i] = 0;
        }
    }
    return out;
}

double Distribution::entropy_of_mask(std::uint64_t mask) const
{
    if (mask == 0)
        return 0.0;
    return shannon_entropy(marginal_table(mask));
}

double binary_entropy(double p)
{
    if (p <= 0.0 || p >= 1.0)
        return 0.0;
    return -plogp(p) - plogp(1.0 - p);
}

double shannon_entropy(std::span<const double> probabilities)
{
    double h = 0.0;
    for (double p : probabilities)
        h -= plogp(p);
    return h == 0.0 ? 0.0 : h;
}

Distribution marginal(const Distribution& dist, const VarSet& keep)
{
    const std::uint64_t mask = dist.mask_of(keep);
    std::vector<VariableSpec> vars;
    for (std::size_t i = 0; i < dist.num_variables(); ++i)
        if (mask >> i & 1U)
            vars.push_back(dist.variables()[i]);
    auto table = dist.marginal_table(mask);
    // summation can drift by a few ulps; the source table was normalized
    double total = std::accumulate(table.begin(), table.end(), 0.0);
    if (std::abs(total - 1.0) > Distribution::kNormTolerance)
        throw ArgumentError("marginal lost normalization");
    return Distribution(std::move(vars), std::move(table));
}

Distribution condition(const Distribution& dist, const std::vector<std::pair<std::string, int>>& on)
{
    const std::size_t n = dist.num_variables();
    std::vector<int> fixed(n, -1);
    for (const auto& [name, value] : on) {
        const std::size_t i = dist.index_of(name);
        if (value < 0 || value >= dist.variables()[i].cardinality)
            throw ArgumentError("conditioning value out of range for '" + name + "'");
        if (fixed[i] >= 0 && fixed[i] != value)
            throw DegenerateEventError("contradictory conditioning on '" + name + "'");
        fixed[i] = value;
    }
    std::vector<VariableSpec> rest;
    for (std::size_t i = 0; i < n; ++i)
        if (fixed[i] < 0)
            rest.push_back(dist.variables()[i]);

    std::vector<double> slice;
    slice.reserve(dist.size());
    double mass = 0.0;
    for (std::size_t flat = 0; flat < dist.size(); ++flat) {
        const auto a = dist.unravel(flat);
        bool match = true;
        for (std::size_t i = 0; i < n && match; ++i)
            match = fixed[i] < 0 || a[i] == fixed[i];
        if (match) {
            slice.push_back(dist.table()[flat]);
            mass += dist.table()[flat];
        }
    }
    if (!(mass > 0.0))
        throw DegenerateEventError("conditioning event has probability zero");
    for (double& p : slice)
        p /= mass;
    return Distribution(std::move(rest), std::move(slice));
}

Distribution reorder(const Distribution& dist, const VarSet& order)
{
    if (order.size() != dist.num_variables())
        throw ArgumentError("reorder needs a permutation of all variables");
    std::vector<std::size_t> pos(order.size());
    std::vector<VariableSpec> vars;
    std::uint64_t seen = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        pos[k] = dist.index_of(order[k]);
        if (seen >> pos[k] & 1U)
            throw ArgumentError("reorder list repeats '" + order[k] + "'");
        seen |= std::uint64_t{1} << pos[k];
        vars.push_back(dist.variables()[pos[k]]);
    }
    std::vector<double> table(dist.size());
    std::vector<int> target(order.size());
    for (std::size_t flat = 0; flat < dist.size(); ++flat) {
        const auto a = dist.unravel(flat);
        std::size_t idx = 0;
        for (std::size_t k = 0; k < order.size(); ++k)
            idx = idx * static_cast<std::size_t>(vars[k].cardinality) + static_cast<std::size_t>(a[pos[k]]);
        table[idx] = dist.table()[flat];
    }
    return Distribution(std::move(vars), std::move(table));
}

double entropy(const Distribution& dist, const VarSet& subset) { return dist.entropy_of_mask(dist.mask_of(subset)); }

double mutual_information(const Distribution& dist, const VarSet& a, const VarSet& b)
{
    const auto ma = dist.mask_of(a);
    const auto mb = dist.mask_of(b);
    require_disjoint({ma, mb});
    return dist.entropy_of_mask(ma) + dist.entropy_of_mask(mb) - dist.entropy_of_mask(ma | mb);
}

double conditional_mutual_information(const Distribution& dist, const VarSet& a, const VarSet& b,
                                      const VarSet& given)
{
    const auto ma = dist.mask_of(a);
    const auto mb = dist.mask_of(b);
    const auto mc = dist.mask_of(given);
    require_disjoint({ma, mb, mc});
    return dist.entropy_of_mask(ma | mc) + dist.entropy_of_mask(mb | mc) - dist.entropy_of_mask(ma | mb | mc) -
           dist.entropy_of_mask(mc);
}

double tripartite_information(const Distribution& dist, const VarSet& a, const VarSet& b, const VarSet& c)
{
    const auto ma = dist.mask_of(a);
    const auto mb = dist.mask_of(b);
    const auto mc = dist.mask_of(c);
    require_disjoint({ma, mb, mc});
    auto H = [&](std::uint64_t m) { return dist.entropy_of_mask(m); };
    return H(ma | mb | mc) - H(ma | mb) - H(ma | mc) - H(mb | mc) + H(ma) + H(mb) + H(mc);
}

double l1_md_measure(const Distribution& dist, const VarSet& inputs, const VarSet& lambda)
{
    if (lambda.empty())
        throw ArgumentError("l1_md_measure needs a hidden-variable set");
    for (const auto& l : lambda)
        if (!dist.has(l))
            throw ArgumentError("hidden variable '" + l + "' is missing from the distribution");
    const auto mi = dist.mask_of(inputs);
    const auto ml = dist.mask_of(lambda);
    require_disjoint({mi, ml});

    // joint table over inputs ∪ lambda in variable order, plus its two marginals
    const auto joint = dist.marginal_table(mi | ml);
    const auto pin = dist.marginal_table(mi);
    const auto plam = dist.marginal_table(ml);
    std::size_t jsize = 1;
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < dist.num_variables(); ++i)
        if ((mi | ml) >> i & 1U)
            pos.push_back(i);
    std::vector<int> digit(pos.size(), 0);
    for (auto i : pos)
        jsize *= static_cast<std::size_t>(dist.variables()[i].cardinality);

    double total = 0.0;
    for (std::size_t j = 0; j < jsize; ++j) {
        std::size_t ii = 0, li = 0;
        for (std::size_t k = 0; k < pos.size(); ++k) {
            const auto card = static_cast<std::size_t>(dist.variables()[pos[k]].cardinality);
            if (mi >> pos[k] & 1U)
                ii = ii * card + static_cast<std::size_t>(digit[k]);
            else
                li = li * card + static_cast<std::size_t>(digit[k]);
        }
        total += std::abs(joint[j] - pin[ii] * plam[li]);
        for (std::size_t k = pos.size(); k-- > 0;) {
            if (++digit[k] < dist.variables()[pos[k]].cardinality)
                break;
            digit[k] = 0;
        }
    }
    return total;
}

double l1_md_measure(const Distribution& dist, const VarSet& inputs, const std::string& lambda)
{
    return l1_md_measure(dist, inputs, VarSet{lambda});
}

EntropyVector entropy_vector(const Distribution& dist)
{
    const std::size_t n = dist.num_variables();
    if (n > kMaxEntropyVectorVariables)
        throw CapacityError("entropy_vector supports at most 12 variables");
    EntropyVector ev;
    ev.names = dist.names();
    const std::uint64_t count = (std::uint64_t{1} << n) - 1;
    ev.values.resize(count);
    for (std::uint64_t mask = 1; mask <= count; ++mask)
        ev.values[mask - 1] = dist.entropy_of_mask(mask);
    return ev;
}

} // namespace mdnet
