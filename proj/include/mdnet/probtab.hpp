#pragma once

// Finite joint distributions over named discrete variables and the
// information measures evaluated on them. All logarithms are base 2.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mdnet {

using VarSet = std::vector<std::string>;

struct VariableSpec {
    std::string name;
    int cardinality = 1;

    bool operator==(const VariableSpec&) const = default;
};

/// Dense joint probability table. Row-major with the last variable varying
/// fastest. Immutable after construction; construction validates
/// nonnegativity and normalization (tolerance 1e-12) and never renormalizes.
class Distribution {
public:
    static constexpr double kNormTolerance = 1e-12;

    Distribution(std::vector<VariableSpec> variables, std::vector<double> table);

    static Distribution uniform(std::vector<VariableSpec> variables);
    static Distribution point_mass(std::vector<VariableSpec> variables, std::span<const int> values);

    const std::vector<VariableSpec>& variables() const { return variables_; }
    std::span<const double> table() const { return table_; }
    std::size_t size() const { return table_.size(); }
    std::size_t num_variables() const { return variables_.size(); }

    bool has(std::string_view name) const;
    /// Position of a variable; throws NameError if absent.
    std::size_t index_of(std::string_view name) const;
    /// Bitmask over variable positions; throws NameError on unknown names.
    std::uint64_t mask_of(const VarSet& names) const;
    VarSet names() const;

    double prob(std::span<const int> assignment) const;
    std::size_t flat_index(std::span<const int> assignment) const;
    std::vector<int> unravel(std::size_t flat) const;

    /// Marginal table over the variables in `mask`, in variable order.
    std::vector<double> marginal_table(std::uint64_t mask) const;
    /// Entropy (bits) of the marginal over the variables in `mask`.
    double entropy_of_mask(std::uint64_t mask) const;

    bool operator==(const Distribution& other) const = default;

private:
    std::vector<VariableSpec> variables_;
    std::vector<double> table_;
    std::vector<std::size_t> strides_;
};

/// Binary entropy h(p) in bits with 0 log 0 = 0.
double binary_entropy(double p);

/// -sum p log2 p over a table, 0 log 0 = 0.
double shannon_entropy(std::span<const double> probabilities);

Distribution marginal(const Distribution& dist, const VarSet& keep);
Distribution condition(const Distribution& dist, const std::vector<std::pair<std::string, int>>& on);

/// Reorders variables; `order` must be a permutation of the variable names.
Distribution reorder(const Distribution& dist, const VarSet& order);

double entropy(const Distribution& dist, const VarSet& subset);
double mutual_information(const Distribution& dist, const VarSet& a, const VarSet& b);
double conditional_mutual_information(const Distribution& dist, const VarSet& a, const VarSet& b,
                                      const VarSet& given);
/// H(A,B,C) - H(A,B) - H(A,C) - H(B,C) + H(A) + H(B) + H(C). May be negative.
double tripartite_information(const Distribution& dist, const VarSet& a, const VarSet& b,
                              const VarSet& c);

/// L1 distance between p(inputs, lambda) and p(inputs) p(lambda), in [0, 2].
double l1_md_measure(const Distribution& dist, const VarSet& inputs, const VarSet& lambda);
double l1_md_measure(const Distribution& dist, const VarSet& inputs, const std::string& lambda);

/// Entropies of every nonempty subset, indexed by bitmask - 1.
struct EntropyVector {
    VarSet names;
    std::vector<double> values;

    double at(std::uint64_t mask) const { return mask == 0 ? 0.0 : values.at(mask - 1); }
};

inline constexpr std::size_t kMaxEntropyVectorVariables = 12;

EntropyVector entropy_vector(const Distribution& dist);

} // namespace mdnet
