#include "mdnet/cone_engine.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "mdnet/error.hpp"

namespace mdnet {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Rational linear_part(const LinForm& f, const std::vector<Rational>& v)
{
    Rational s = 0;
    for (std::size_t i = 0; i < f.dim(); ++i)
        if (f.coeffs[i] != 0 && v[i] != 0)
            s += f.coeffs[i] * v[i];
    return s;
}

} // namespace

Cone shannon_cone(const VarSet& names, const std::vector<std::string>& aux)
{
    if (names.empty() || names.size() > kMaxConeVariables)
        throw CapacityError("Shannon cone supports 1 to 7 variables");
    EntropySpace space(names, aux);
    Cone cone(space);
    const std::size_t n = names.size();
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    std::vector<LinForm> forms;
    for (std::size_t i = 0; i < n; ++i)
        forms.push_back(EntropyExpr::H(space, full) - EntropyExpr::H(space, full & ~(std::uint64_t{1} << i)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::uint64_t bi = std::uint64_t{1} << i;
            const std::uint64_t bj = std::uint64_t{1} << j;
            const std::uint64_t rest = full & ~(bi | bj);
            // every subset of rest, in increasing mask order
            for (std::uint64_t s = 0;; s = (s - rest) & rest) {
                forms.push_back(EntropyExpr::cmi(space, bi, bj, s));
                if (s == rest)
                    break;
            }
        }
    }
    cone.set_inequalities(std::move(forms));
    return cone;
}

Cone shannon_cone(int n)
{
    if (n < 1 || n > static_cast<int>(kMaxConeVariables))
        throw CapacityError("Shannon cone supports 1 to 7 variables");
    VarSet names;
    for (int i = 1; i <= n; ++i)
        names.push_back("X" + std::to_string(i));
    return shannon_cone(names);
}

Cone causal_cone(const Dag& dag, const std::vector<std::string>& aux)
{
    if (dag.size() > kMaxConeVariables)
        throw CapacityError("causal cone supports at most 7 nodes");
    Cone cone = shannon_cone(dag.names(), aux);
    if (dag.latent_roots().size() >= 2)
        cone.add_equality(source_independence_constraint(dag, cone.space()));
    for (const auto& ci : local_markov_constraints(dag))
        cone.add_equality(ci_equality(cone.space(), ci));
    return cone;
}

MaxResult maximize(const Cone& cone, const LinForm& objective)
{
    MaxResult out;
    out.lp = lp_maximize(cone.space().dim(), cone.inequalities(), cone.equalities(), objective);
    if (out.lp.status == LpStatus::Infeasible)
        throw Error("cone is empty; this cannot happen for a cone containing the origin");
    out.unbounded = out.lp.status == LpStatus::Unbounded;
    if (!out.unbounded)
        out.optimum = out.lp.value;
    return out;
}

Implication is_implied(const Cone& cone, const LinForm& candidate)
{
    Implication imp;
    const LinForm neg = -candidate;
    const auto lp = lp_maximize(cone.space().dim(), cone.inequalities(), cone.equalities(), neg);
    if (lp.status == LpStatus::Infeasible) {
        // empty system implies everything; no certificate shape to report
        imp.implied = true;
        return imp;
    }
    if (lp.status == LpStatus::Optimal && lp.value <= 0) {
        imp.implied = true;
        imp.slack = -lp.value;
        imp.ineq_multipliers = lp.ineq_multipliers;
        imp.eq_multipliers = lp.eq_multipliers;
        imp.certificate_ok = implication_certificate_holds(cone, candidate, imp);
        return imp;
    }
    imp.implied = false;
    imp.witness = lp.point;
    if (lp.status == LpStatus::Unbounded) {
        const Rational gain = linear_part(neg, lp.ray);
        Rational k = 1;
        const Rational at_point = candidate.evaluate(lp.point);
        if (at_point + 1 > 0)
            k = (at_point + 1) / gain;
        for (std::size_t i = 0; i < imp.witness.size(); ++i)
            imp.witness[i] += k * lp.ray[i];
    }
    return imp;
}

bool implication_certificate_holds(const Cone& cone, const LinForm& candidate, const Implication& imp)
{
    if (!imp.implied || imp.slack < 0)
        return false;
    const auto& g = cone.inequalities();
    const auto& e = cone.equalities();
    if (imp.ineq_multipliers.size() != g.size() || imp.eq_multipliers.size() != e.size())
        return false;
    LinForm rhs(candidate.dim());
    rhs.constant = imp.slack;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (imp.ineq_multipliers[i] < 0)
            return false;
        if (imp.ineq_multipliers[i] != 0)
            rhs += g[i] * imp.ineq_multipliers[i];
    }
    for (std::size_t k = 0; k < e.size(); ++k)
        if (imp.eq_multipliers[k] != 0)
            rhs += e[k] * imp.eq_multipliers[k];
    return rhs == candidate;
}

Cone remove_redundant(const Cone& cone)
{
    std::vector<LinForm> kept = cone.inequalities();
    const auto& eqs = cone.equalities();
    std::size_t i = 0;
    while (i < kept.size()) {
        std::vector<LinForm> others;
        others.reserve(kept.size() - 1);
        for (std::size_t j = 0; j < kept.size(); ++j)
            if (j != i)
                others.push_back(kept[j]);
        const auto lp = lp_maximize(cone.space().dim(), others, eqs, -kept[i]);
        const bool implied =
            lp.status == LpStatus::Infeasible || (lp.status == LpStatus::Optimal && lp.value <= 0);
        if (implied)
            kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    Cone out(cone.space());
    out.set_equalities(eqs);
    out.set_inequalities(std::move(kept));
    return out;
}

Cone fm_eliminate(const Cone& cone, std::size_t coordinate, const FmOptions& options)
{
    if (coordinate >= cone.space().dim())
        throw ArgumentError("coordinate out of range");
    const auto& ineqs = cone.inequalities();
    const auto& eqs = cone.equalities();

    auto pivot_eq = std::find_if(eqs.begin(), eqs.end(), [&](const LinForm& e) { return e.coeffs[coordinate] != 0; });
    Cone out(cone.space());
    if (pivot_eq != eqs.end()) {
        const LinForm& e = *pivot_eq;
        auto substitute = [&](const LinForm& f) {
            if (f.coeffs[coordinate] == 0)
                return f;
            const Rational factor = f.coeffs[coordinate] / e.coeffs[coordinate];
            LinForm g = f - e * factor;
            g.coeffs[coordinate] = 0;
            return g;
        };
        std::vector<LinForm> new_eqs;
        for (const auto& f : eqs)
            if (&f != &*pivot_eq)
                new_eqs.push_back(substitute(f));
        std::vector<LinForm> new_ineqs;
        for (const auto& f : ineqs)
            new_ineqs.push_back(substitute(f));
        out.set_equalities(std::move(new_eqs));
        out.set_inequalities(std::move(new_ineqs));
        for (const auto& f : out.equalities())
            if (f.is_constant())
                throw Error("inconsistent equality system");
    }
    else {
        std::vector<const LinForm*> pos;
        std::vector<const LinForm*> neg;
        std::vector<LinForm> next;
        for (const auto& f : ineqs) {
            const auto& c = f.coeffs[coordinate];
            if (c > 0)
                pos.push_back(&f);
            else if (c < 0)
                neg.push_back(&f);
            else
                next.push_back(f);
        }
        const std::size_t produced = next.size() + pos.size() * neg.size();
        if (produced > options.ceiling)
            throw EliminationAborted("Fourier-Motzkin step would produce " + std::to_string(produced) +
                                         " inequalities (ceiling " + std::to_string(options.ceiling) + ")",
                                     0, 0, produced);
        for (const LinForm* p : pos) {
            for (const LinForm* n : neg) {
                LinForm g = *p * (-n->coeffs[coordinate]) + *n * p->coeffs[coordinate];
                g.coeffs[coordinate] = 0;
                next.push_back(std::move(g));
            }
        }
        std::sort(next.begin(), next.end(), [](const LinForm& a, const LinForm& b) {
            return linform_less(canonical(a, false), canonical(b, false));
        });
        out.set_equalities(eqs);
        out.set_inequalities(std::move(next));
    }
    for (const auto& f : out.inequalities())
        if (f.is_constant() && f.constant < 0)
            throw Error("inconsistent inequality system");
    return options.reduce ? remove_redundant(out) : out;
}

bool VerificationReport::all_pass() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

bool ImplicationReport::all_pass() const
{
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const ImplicationCheck& c) { return c.pass; });
}

Cone lemma1_cone()
{
    const Dag dag = scenario::bell_md_aux();
    Cone cone = causal_cone(dag, {"t"});
    const auto& s = cone.space();
    cone.add_equality(EntropyExpr::aux(s, "t") - EntropyExpr::I(s, {"X", "Y"}, {"Lambda"}));
    return cone;
}

std::vector<std::pair<std::string, LinForm>> theta_expressions(const EntropySpace& s)
{
    const LinForm i3 = EntropyExpr::I3(s, {"X"}, {"Y"}, {"R"});
    const LinForm ixr = EntropyExpr::I(s, {"X"}, {"R"});
    const LinForm iyr = EntropyExpr::I(s, {"Y"}, {"R"});
    const LinForm hxy = EntropyExpr::H(s, VarSet{"X", "Y"});
    const LinForm hr = EntropyExpr::H(s, VarSet{"R"});
    return {
        {"H(X,Y|R)", EntropyExpr::cond_H(s, {"X", "Y"}, {"R"})},
        {"H(X,Y) - I(X:Y:R) - I(X:R) - I(Y:R)", hxy - i3 - ixr - iyr},
        {"H(X,Y) + H(R) - 2I(X:Y:R) - 2I(X:R) - 2I(Y:R)", hxy + hr - (i3 + ixr + iyr) * Rational(2)},
    };
}

VerificationReport verify_lemma1_bounds()
{
    const auto start = Clock::now();
    VerificationReport report;
    const Cone cone = lemma1_cone();
    const LinForm t = EntropyExpr::aux(cone.space(), "t");
    for (auto& [label, theta] : theta_expressions(cone.space())) {
        BoundCheck check;
        check.label = "t <= " + label;
        check.objective = t - theta;
        const auto res = maximize(cone, check.objective);
        check.status = res.lp.status;
        if (!res.unbounded) {
            check.optimum = res.optimum;
            check.certificate_ok = certificate_holds(cone.inequalities(), cone.equalities(), check.objective, res.lp);
        }
        check.pass = !res.unbounded && check.optimum == 0 && check.certificate_ok;
        report.checks.push_back(std::move(check));
    }
    report.seconds = seconds_since(start);
    return report;
}

namespace {

ImplicationCheck run_check(const Cone& cone, std::string label, const LinForm& candidate, bool expected)
{
    ImplicationCheck c;
    c.label = std::move(label);
    c.expected = expected;
    c.result = is_implied(cone, candidate);
    if (expected)
        c.pass = c.result.implied && c.result.certificate_ok;
    else
        c.pass = !c.result.implied && !c.result.witness.empty() && cone.max_violation([&] {
            std::vector<double> w;
            for (const auto& r : c.result.witness)
                w.push_back(r.get_d());
            return w;
        }()) <= 1e-9 && candidate.evaluate(c.result.witness) < 0;
    return c;
}

} // namespace

ImplicationReport verify_mi_lower_bound()
{
    const auto start = Clock::now();
    ImplicationReport report;
    const Cone cone = lemma1_cone();
    const auto& s = cone.space();
    const LinForm t = EntropyExpr::aux(s, "t");
    report.checks.push_back(run_check(cone, "I(X:Y) <= I(X,Y:Lambda)", t - EntropyExpr::I(s, {"X"}, {"Y"}), true));
    report.checks.push_back(run_check(cone, "0 <= I(X,Y:Lambda)", t, true));
    report.checks.push_back(run_check(cone, "H(X) <= I(X,Y:Lambda)", t - EntropyExpr::H(s, VarSet{"X"}), false));
    report.seconds = seconds_since(start);
    return report;
}

ImplicationReport verify_lemma2_step()
{
    const auto start = Clock::now();
    ImplicationReport report;
    Cone cone = shannon_cone(VarSet{"X", "R", "Lambda"});
    const auto& s = cone.space();
    auto H = [&](const VarSet& v) { return EntropyExpr::H(s, v); };
    const LinForm step = H({"X", "Lambda"}) + H({"X", "R"}) - H({"R", "Lambda"}) - H({"X"});
    report.checks.push_back(run_check(cone, "H(R,Lambda) + H(X) - H(X,Lambda) <= H(X|R) + H(R)", step, true));

    Cone indep = cone;
    indep.add_equality(H({"R", "Lambda"}) - H({"R"}) - H({"Lambda"}));
    const LinForm lemma2 = EntropyExpr::cond_H(s, {"X"}, {"R"}) - EntropyExpr::I(s, {"X"}, {"Lambda"});
    report.checks.push_back(run_check(indep, "I(X:Lambda) <= H(X|R) given I(R:Lambda) = 0", lemma2, true));
    report.checks.push_back(run_check(cone, "I(X:Lambda) <= H(X|R) without independence", lemma2, false));
    report.seconds = seconds_since(start);
    return report;
}

DeriveResult derive_md_upper_bounds(const DeriveOptions& options)
{
    const auto start = Clock::now();
    Cone cone = lemma1_cone();
    const EntropySpace& space = cone.space();
    const std::uint64_t keep_mask = space.mask_of({"X", "Y", "R"});

    std::set<std::size_t> pending;
    for (std::size_t c = 0; c < space.num_subset_coordinates(); ++c)
        if ((space.mask_at(c) & ~keep_mask) != 0)
            pending.insert(c);

    DeriveResult result;
    result.peak_inequalities = cone.inequalities().size();
    FmOptions fm;
    fm.ceiling = options.ceiling;
    while (!pending.empty()) {
        if (options.max_seconds && seconds_since(start) > *options.max_seconds)
            throw EliminationAborted("time limit reached", result.eliminated, static_cast<int>(pending.size()),
                                     result.peak_inequalities);
        // coordinates in an equality first, then fewest pos*neg products
        std::size_t best = *pending.begin();
        std::size_t best_score = static_cast<std::size_t>(-1);
        for (std::size_t c : pending) {
            std::size_t score = 0;
            const bool in_eq = std::any_of(cone.equalities().begin(), cone.equalities().end(),
                                           [&](const LinForm& e) { return e.coeffs[c] != 0; });
            if (!in_eq) {
                std::size_t p = 0;
                std::size_t n = 0;
                for (const auto& f : cone.inequalities()) {
                    p += f.coeffs[c] > 0;
                    n += f.coeffs[c] < 0;
                }
                score = p * n + 1;
            }
            if (score < best_score) {
                best_score = score;
                best = c;
            }
        }
        try {
            cone = fm_eliminate(cone, best, fm);
        }
        catch (const EliminationAborted& e) {
            throw EliminationAborted(e.what(), result.eliminated, static_cast<int>(pending.size()),
                                     std::max(result.peak_inequalities, e.peak_inequalities()));
        }
        pending.erase(best);
        ++result.eliminated;
        result.peak_inequalities = std::max(result.peak_inequalities, cone.inequalities().size());
        if (options.progress)
            options.progress("eliminated " + space.key(best) + ": " + std::to_string(cone.inequalities().size()) +
                             " inequalities, " + std::to_string(cone.equalities().size()) + " equalities");
    }

    EntropySpace target({"X", "Y", "R"}, {"t"});
    auto project = [&](const LinForm& f) {
        LinForm g(target.dim());
        g.constant = f.constant;
        for (std::size_t c = 0; c < f.dim(); ++c)
            if (f.coeffs[c] != 0)
                g.coeffs[target.coordinate_from_key(space.key(c))] = f.coeffs[c];
        return g;
    };
    Cone projected(target);
    std::vector<LinForm> ineqs;
    for (const auto& f : cone.inequalities())
        ineqs.push_back(project(f));
    std::vector<LinForm> eqs;
    for (const auto& f : cone.equalities())
        eqs.push_back(project(f));
    projected.set_equalities(std::move(eqs));
    projected.set_inequalities(std::move(ineqs));
    result.cone = remove_redundant(projected);

    const LinForm t = EntropyExpr::aux(target, "t");
    for (auto& [label, theta] : theta_expressions(target))
        result.checks.push_back(run_check(result.cone, "t <= " + label, theta - t, true));
    result.checks.push_back(run_check(result.cone, "t >= I(X:Y)", t - EntropyExpr::I(target, {"X"}, {"Y"}), true));
    result.checks.push_back(run_check(result.cone, "t >= 0", t, true));
    result.seconds = seconds_since(start);
    return result;
}

} // namespace mdnet
