#pragma once

// Brute-force ground truth: deterministic strategies, measurement-dependent
// models, the no-signaling lift, and seeded samplers.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mdnet/bell_functionals.hpp"
#include "mdnet/causal_graphs.hpp"
#include "mdnet/md_bounds.hpp"
#include "mdnet/probtab.hpp"
#include "mdnet/rational.hpp"

namespace mdnet {

/// Seeded generator whose output does not depend on the standard library's
/// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }
    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform in [0, n).
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
    double normal();
    /// Exponential(1) draws normalized: a flat Dirichlet sample.
    std::vector<double> simplex(std::size_t n);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

/// responses[party][input] = output. One input and one output per party.
struct DeterministicStrategy {
    std::vector<std::vector<int>> responses;
    std::optional<std::size_t> lambda;

    bool operator==(const DeterministicStrategy&) const = default;
};

enum class FunctionalKind { Chsh, Mermin, Cglmp };

struct FunctionalSpec {
    FunctionalKind kind = FunctionalKind::Chsh;
    int d = 2; // outputs per party for CGLMP

    int parties() const { return kind == FunctionalKind::Mermin ? 3 : 2; }
    int outcomes() const { return kind == FunctionalKind::Cglmp ? d : 2; }
};

/// "chsh", "mermin", "cglmp:d".
FunctionalSpec parse_functional(const std::string& name);
double evaluate(const FunctionalSpec& f, const Behavior& b);

/// Standard variable names: inputs x, y, z and outputs a, b, c.
std::vector<VariableSpec> party_inputs(int parties, int settings = 2);
std::vector<VariableSpec> party_outputs(int parties, int outcomes);

Behavior deterministic_behavior(const DeterministicStrategy& s, int settings, int outcomes);

/// All strategies with `settings` inputs and `outcomes` outputs per party, in
/// lexicographic order of the flattened response tables.
std::vector<DeterministicStrategy> enumerate_strategies(int parties, int settings, int outcomes);

struct OracleMax {
    double value = 0.0;
    DeterministicStrategy argmax;
    std::size_t strategies = 0;
};

inline constexpr std::size_t kMaxOracleStrategies = 1u << 20;

/// Exhaustive search; first strategy attaining the maximum wins. CGLMP needs d <= 4.
OracleMax max_over_deterministic(const FunctionalSpec& f);

/// p(lambda), p(inputs | lambda) and a deterministic strategy per lambda.
/// Party i owns input i and output i.
struct MdModel {
    std::vector<VariableSpec> inputs;
    std::vector<VariableSpec> outputs;
    std::vector<double> p_lambda;
    std::vector<std::vector<double>> p_inputs_given_lambda; // [lambda][input cell]
    std::vector<DeterministicStrategy> strategies;

    std::size_t lambdas() const { return p_lambda.size(); }
    /// Throws ArgumentError unless rows are normalized within 1e-9 and strategies total.
    void validate() const;
};

struct ModelBehavior {
    Behavior behavior;
    Distribution inputs_lambda; // joint over the inputs followed by "Lambda"
};

/// p(outputs | inputs) = sum_lambda p(lambda | inputs) delta(outputs, f_lambda(inputs)).
/// Input cells of probability zero get uniform outputs.
ModelBehavior behavior_of(const MdModel& model);
/// I(inputs : Lambda) of the model.
double model_mutual_information(const MdModel& model);

/// Exact p(outputs | inputs), with the model's doubles read as exact rationals.
struct ExactBehavior {
    std::vector<VariableSpec> inputs;
    std::vector<VariableSpec> outputs;
    std::vector<Rational> table; // same layout as Behavior
};

ExactBehavior exact_behavior_of(const MdModel& model);
Rational exact_correlator(const ExactBehavior& b, const std::vector<int>& inputs);
/// Every single-party and two-party output marginal independent of the other inputs.
bool exact_no_signaling(const ExactBehavior& b);

/// Appendix A style model with 8 classes and Mermin value m in [2, 4].
MdModel mermin_optimal_md_model(double m, MerminMode mode);

/// Outputs become a + l1, b + l1 + l2, c + l2 (mod 2) with l1, l2 uniform bits;
/// lambda index becomes lambda * 4 + l1 * 2 + l2.
MdModel nosignaling_lift(const MdModel& model);

/// Random binary model: `parties` parties with binary inputs and outputs.
MdModel random_md_model(int parties, std::size_t lambdas, std::uint64_t seed);

struct SampleOptions {
    std::map<std::string, int> cardinalities; // any node; default 2, at most 8
    bool deterministic_response = false;      // observed non-root nodes are functions of their parents
    bool include_latent = false;
};

inline constexpr std::size_t kMaxSampleCells = 1u << 24;

/// Random conditional tables honoring the DAG; returns the observed marginal
/// (or the full joint with include_latent). Deterministic given the seed.
Distribution sample_causal_model(const Dag& dag, const SampleOptions& options, std::uint64_t seed);

struct FrontierResult {
    double best_mi = 0.0;
    double achieved_value = 0.0;
    MdModel model;
    std::size_t evaluations = 0;
};

inline constexpr std::size_t kDefaultSearchBudget = 100000;

/// Annealing over p(lambda | inputs) with uniform inputs and one lambda per
/// deterministic strategy; each candidate is mixed with a measurement-
/// independent or a fully dependent model so that it hits `value` exactly.
/// Mermin searches start from mermin_optimal_md_model (uniform-8).
FrontierResult md_frontier_search(const FunctionalSpec& target, double value,
                                  std::size_t budget = kDefaultSearchBudget, std::uint64_t seed = 1);

} // namespace mdnet
