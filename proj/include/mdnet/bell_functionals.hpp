#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mdnet/probtab.hpp"

namespace mdnet {

/// Which inputs and outputs (by position) belong to one party.
struct Party {
    std::vector<std::size_t> inputs;
    std::vector<std::size_t> outputs;

    bool operator==(const Party&) const = default;
};

/// Conditional table p(outputs | inputs). Layout: one contiguous slice of
/// output probabilities per input assignment, both enumerated row-major
/// with the last variable fastest.
class Behavior {
public:
    static constexpr double kNormTolerance = 1e-12;

    Behavior(std::vector<VariableSpec> inputs, std::vector<VariableSpec> outputs, std::vector<double> table,
             std::optional<std::vector<double>> input_distribution = std::nullopt, std::vector<Party> parties = {});

    const std::vector<VariableSpec>& inputs() const { return inputs_; }
    const std::vector<VariableSpec>& outputs() const { return outputs_; }
    std::span<const double> table() const { return table_; }
    const std::optional<std::vector<double>>& input_distribution() const { return input_dist_; }
    /// Explicit parties, or one party per (input i, output i) when the counts agree.
    const std::vector<Party>& parties() const { return parties_; }

    std::size_t num_input_cells() const { return n_in_; }
    std::size_t num_output_cells() const { return n_out_; }

    std::size_t input_index(std::span<const int> x) const;
    std::size_t output_index(std::span<const int> a) const;
    std::vector<int> input_values(std::size_t flat) const;
    std::vector<int> output_values(std::size_t flat) const;

    double prob(std::span<const int> outputs, std::span<const int> inputs) const;
    double prob_flat(std::size_t out, std::size_t in) const { return table_[in * n_out_ + out]; }
    std::span<const double> slice(std::size_t in) const { return std::span(table_).subspan(in * n_out_, n_out_); }

    /// Joint p(inputs, outputs) using the input distribution (uniform if absent).
    Distribution joint() const;

    bool operator==(const Behavior&) const = default;

private:
    std::vector<VariableSpec> inputs_;
    std::vector<VariableSpec> outputs_;
    std::vector<double> table_;
    std::optional<std::vector<double>> input_dist_;
    std::vector<Party> parties_;
    std::size_t n_in_ = 1;
    std::size_t n_out_ = 1;
};

/// p(outputs | inputs) from a joint distribution. Throws DegenerateEventError
/// when an input assignment has probability zero.
Behavior behavior_from_distribution(const Distribution& dist, const VarSet& inputs, const VarSet& outputs,
                                    std::vector<Party> parties = {});

struct NoSignalingResult {
    bool ok = false;
    double worst_violation = 0.0;
};

NoSignalingResult is_no_signaling(const Behavior& b, double tol = 1e-10);

/// sum over outputs of (-1)^(a_1 + ... + a_k) p(a | x). All outputs binary.
double correlator(const Behavior& b, std::span<const int> inputs);
double correlator(const Behavior& b, std::initializer_list<int> inputs);

double chsh(const Behavior& b);
double cglmp(const Behavior& b, int d);
double mermin(const Behavior& b);

enum class MiddleMode { Auto, SingleBit, SplitBit };

struct BilocalityValue {
    double I = 0.0;
    double J = 0.0;
    double value = 0.0;
};

/// Outputs (a1, a2, a3), inputs (x1, x3). In split-bit mode the middle output
/// has cardinality 4: the most significant bit enters I, the other J.
BilocalityValue bilocality(const Behavior& b, MiddleMode mode = MiddleMode::Auto);

/// Outputs (a1..a{n+1}), inputs (x1, x{n+1}); middle outputs as in bilocality().
BilocalityValue chain_nlocality_terms(const Behavior& b, int n, MiddleMode mode = MiddleMode::Auto);
double chain_nlocality(const Behavior& b, int n, MiddleMode mode = MiddleMode::Auto);

/// The PR box: a xor b = x and y.
Behavior pr_box();

} // namespace mdnet
