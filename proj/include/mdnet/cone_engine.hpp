#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mdnet/causal_graphs.hpp"
#include "mdnet/cone.hpp"
#include "mdnet/lp.hpp"

namespace mdnet {

inline constexpr std::size_t kMaxConeVariables = 7;

/// Elemental inequalities on the given variables (1..7 of them), plus
/// optional auxiliary coordinates left unconstrained.
Cone shannon_cone(const VarSet& names, const std::vector<std::string>& aux = {});
/// Variables named X1..Xn.
Cone shannon_cone(int n);

/// Shannon cone over every node of the DAG, the source-independence equality
/// (when there are at least two latent roots) and the local Markov equalities.
Cone causal_cone(const Dag& dag, const std::vector<std::string>& aux = {});

struct MaxResult {
    bool unbounded = false;
    Rational optimum;
    LpResult lp;
};

MaxResult maximize(const Cone& cone, const LinForm& objective);

struct Implication {
    bool implied = false;
    /// candidate(x) == slack + sum ineq_multipliers[i] g_i(x) + sum eq_multipliers[k] e_k(x), slack >= 0
    Rational slack;
    std::vector<Rational> ineq_multipliers;
    std::vector<Rational> eq_multipliers;
    bool certificate_ok = false;
    /// A feasible point with candidate < 0 when not implied.
    std::vector<Rational> witness;
};

/// Does every point of the cone satisfy candidate >= 0?
Implication is_implied(const Cone& cone, const LinForm& candidate);

/// Checks the multiplier identity of an implication exactly.
bool implication_certificate_holds(const Cone& cone, const LinForm& candidate, const Implication& imp);

/// Drops inequalities implied by the remaining ones, scanning in order.
Cone remove_redundant(const Cone& cone);

struct FmOptions {
    std::size_t ceiling = 200000;
    bool reduce = true;
};

/// Projects out one coordinate. An equality containing it is used for
/// substitution; otherwise positive and negative occurrences are combined.
/// Throws EliminationAborted when the pairwise combination would exceed the
/// ceiling.
Cone fm_eliminate(const Cone& cone, std::size_t coordinate, const FmOptions& options = {});

struct BoundCheck {
    std::string label;
    LinForm objective;
    LpStatus status = LpStatus::Infeasible;
    Rational optimum;
    bool certificate_ok = false;
    bool pass = false;
};

struct VerificationReport {
    std::vector<BoundCheck> checks;
    double seconds = 0.0;

    bool all_pass() const;
};

/// The measurement-dependence space: causal cone of bell_md_aux() with the
/// auxiliary coordinate t = H(X,Y) + H(Lambda) - H(X,Y,Lambda).
Cone lemma1_cone();

/// The three Lemma-1 expressions in the coordinates of `space` (which must
/// contain X, Y, R).
std::vector<std::pair<std::string, LinForm>> theta_expressions(const EntropySpace& space);

/// maximize(t - Theta_k) for k = 1, 2, 3; each optimum must be exactly 0.
VerificationReport verify_lemma1_bounds();

struct ImplicationCheck {
    std::string label;
    bool expected = true;
    Implication result;
    bool pass = false;
};

struct ImplicationReport {
    std::vector<ImplicationCheck> checks;
    double seconds = 0.0;

    bool all_pass() const;
};

/// I(X:Y) <= t (implied), 0 <= t (implied), H(X) <= t (not implied).
ImplicationReport verify_mi_lower_bound();

/// The Shannon step of the multipartite bound over {X, R, Lambda}, and the
/// resulting bound once R and Lambda are declared independent.
ImplicationReport verify_lemma2_step();

struct DeriveOptions {
    std::size_t ceiling = 200000;
    std::optional<double> max_seconds;
    std::function<void(const std::string&)> progress;
};

struct DeriveResult {
    Cone cone; // over {X, Y, R} with aux t
    int eliminated = 0;
    std::size_t peak_inequalities = 0;
    double seconds = 0.0;
    std::vector<ImplicationCheck> checks;
};

/// Eliminates every coordinate outside {subsets of X,Y,R} and t from the
/// Lemma-1 cone. Throws EliminationAborted on the ceiling or time limit.
DeriveResult derive_md_upper_bounds(const DeriveOptions& options = {});

} // namespace mdnet
