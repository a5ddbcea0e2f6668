#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mdnet/cone.hpp"
#include "mdnet/rational.hpp"

namespace mdnet {

enum class LpStatus { Optimal, Unbounded, Infeasible };

/// Result of an exact maximization over {x free : ineqs(x) >= 0, eqs(x) = 0}.
///
/// When optimal, the multipliers certify the optimum through the affine
/// identity
///     objective(x) == value - sum_i ineq_multipliers[i] * ineqs[i](x)
///                           - sum_k eq_multipliers[k] * eqs[k](x)
/// with every ineq multiplier >= 0. When unbounded, `point` is feasible and
/// `ray` is a direction along which the constraints stay satisfied and the
/// objective grows.
struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::vector<Rational> point;
    std::vector<Rational> ray;
    std::vector<Rational> ineq_multipliers;
    std::vector<Rational> eq_multipliers;
    std::size_t pivots = 0;
};

/// Exact rational simplex with Bland's rule. Entering ties go to the lowest
/// variable index (coordinates first, then constraint slacks in input order).
LpResult lp_maximize(std::size_t dim, std::span<const LinForm> ineqs, std::span<const LinForm> eqs,
                     const LinForm& objective);

/// Re-checks an optimal certificate with exact arithmetic.
bool certificate_holds(std::span<const LinForm> ineqs, std::span<const LinForm> eqs, const LinForm& objective,
                       const LpResult& result);

} // namespace mdnet
