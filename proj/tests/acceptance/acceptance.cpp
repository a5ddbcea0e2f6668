#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mdnet/bell_functionals.hpp"
#include "mdnet/causal_graphs.hpp"
#include "mdnet/cone_engine.hpp"
#include "mdnet/md_bounds.hpp"
#include "mdnet/oracles.hpp"
#include "mdnet/probtab.hpp"
#include "mdnet/quantum_sim.hpp"

using namespace mdnet;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class F>
double timed(F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds_since(t0);
}

void lemma1(Outcome& o)
{
    const auto report = verify_lemma1_bounds();
    for (const auto& c : report.checks)
        o.require(c.status == LpStatus::Optimal && c.optimum == 0 && c.certificate_ok, c.label);
    o.require(report.checks.size() == 3, "three bounds");
    o.require(report.seconds < 60.0, "runtime under 60 s");
    o.detail << "3 optima exactly 0, LP " << report.seconds << " s";
}

void mi_and_lemma2(Outcome& o)
{
    const auto mi = verify_mi_lower_bound();
    o.require(mi.all_pass(), "I(X:Y) <= I(X,Y:Lambda) report");
    const Cone cone = lemma1_cone();
    const auto& s = cone.space();
    LinForm f(s.dim());
    f.coeffs[s.aux_coordinate("t")] = 1;
    f.coeffs[s.coordinate(VarSet{"X"})] = -1;
    f.coeffs[s.coordinate(VarSet{"Y"})] = -1;
    f.coeffs[s.coordinate(VarSet{"X", "Y"})] = 1;
    const auto imp = is_implied(cone, f);
    o.require(imp.implied && implication_certificate_holds(cone, f, imp), "dual certificate");
    const auto l2 = verify_lemma2_step();
    o.require(l2.all_pass(), "Lemma 2 step");
    o.detail << "certificate with " << imp.ineq_multipliers.size() << " multipliers; " << l2.checks.size()
             << " Lemma 2 checks";
}

void formulas(Outcome& o)
{
    const double q = chsh_mi_lower(2 * std::sqrt(2.0));
    o.require(q >= 0.0460 && q <= 0.0466, "chsh_mi_lower(2 sqrt 2)");
    o.require(std::abs(chsh_mi_lower(2.0)) <= 1e-12, "chsh_mi_lower(2)");
    o.require(std::abs(mermin_mi_lower(2.0, MerminMode::Uniform8)) <= 1e-12, "mermin_mi_lower(2)");
    o.require(std::abs(mermin_mi_lower(4.0, MerminMode::Uniform8) - (1 - 0.5 * std::log2(3.0))) <= 1e-12,
              "mermin_mi_lower(4)");
    for (int i = 0; i < 100; ++i) {
        const double v = 2.0 + 2.0 * i / 99.0;
        if (std::abs(mermin_mi_lower(v, MerminMode::Odd4) - chsh_mi_lower(v)) > 1e-12) {
            o.require(false, "odd-4 grid");
            break;
        }
    }
    o.detail << "chsh_mi_lower(2 sqrt 2) = " << q;
}

void oracles(Outcome& o)
{
    const std::vector<std::tuple<std::string, double, std::size_t>> cases{
        {"chsh", 2.0, 16}, {"mermin", 2.0, 64}, {"cglmp:3", 2.0, 81}};
    for (const auto& [name, bound, count] : cases) {
        OracleMax m;
        const double t = timed([&] { m = max_over_deterministic(parse_functional(name)); });
        o.require(std::abs(m.value - bound) < 1e-12 && m.strategies == count && t < 10.0, name);
        o.detail << name << " max " << m.value << " over " << m.strategies << "; ";
    }
}

void fritz(Outcome& o)
{
    const double c = chsh(fritz_conditional(1.0));
    o.require(std::abs(c - 2 * std::sqrt(2.0)) <= 1e-9, "chsh at v = 1");
    const auto formula = critical_visibility(ThetaSource::PaperFormula, BoundKind::Mi);
    const auto dist = critical_visibility(ThetaSource::Distribution, BoundKind::Mi);
    o.require(formula && *formula >= 0.993 && *formula <= 0.995, "formula critical visibility");
    o.require(dist && std::abs(*dist - 0.995643) < 1e-6, "distribution critical visibility golden");
    o.detail << "chsh " << c << "; critical v formula " << formula.value_or(-1) << ", distribution "
             << dist.value_or(-1);
}

void appendix_a(Outcome& o)
{
    for (double m : {2.2, 2.8, 3.4, 4.0})
        for (auto mode : {MerminMode::Uniform8, MerminMode::Odd4}) {
            const auto model = mermin_optimal_md_model(m, mode);
            const double value = mermin(behavior_of(model).behavior);
            const double mi = model_mutual_information(model);
            std::ostringstream label;
            label << "M=" << m << " " << to_string(mode);
            o.require(std::abs(value - m) <= 1e-6 && std::abs(mi - mermin_mi_lower(m, mode)) <= 1e-6, label.str());
        }
    o.detail << "8 models";
}

void appendix_b(Outcome& o)
{
    double worst_ns = 0.0;
    double worst_mi = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto model = random_md_model(3, 1 + seed % 6, seed);
        const auto lifted = nosignaling_lift(model);
        const auto eb = exact_behavior_of(model);
        const auto el = exact_behavior_of(lifted);
        bool same = true;
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z)
                    same = same && exact_correlator(el, {x, y, z}) == exact_correlator(eb, {x, y, z});
        o.require(same, "correlators seed " + std::to_string(seed));
        worst_ns = std::max(worst_ns, is_no_signaling(behavior_of(lifted).behavior).worst_violation);
        worst_mi = std::max(worst_mi, std::abs(model_mutual_information(lifted) - model_mutual_information(model)));
    }
    o.require(worst_ns < 1e-12, "no-signaling");
    o.require(worst_mi <= 1e-9, "mutual information");
    o.detail << "100 models, worst signaling " << worst_ns << ", worst MI change " << worst_mi;
}

void soundness(Outcome& o)
{
    double slack_theta = 1e300;
    double slack_h = 1e300;
    double worst_chsh = 0.0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        SampleOptions opt;
        opt.include_latent = true;
        opt.cardinalities["Lambda"] = 2 + static_cast<int>(seed % 3);
        opt.cardinalities["R"] = 1 + static_cast<int>(seed % 4);
        opt.deterministic_response = seed % 3 == 0;
        const auto d = sample_causal_model(scenario::bell_md_aux(), opt, seed);
        const double mi = mutual_information(d, {"X", "Y"}, {"Lambda"});
        const auto obs = marginal(d, {"X", "Y", "R"});
        slack_theta = std::min(slack_theta, theta(obs).value - mi);
        slack_h = std::min(slack_h, h_inputs_given_r(obs, {"X", "Y"}) - mi);

        SampleOptions bell;
        bell.cardinalities["Lambda"] = 2 + static_cast<int>(seed % 7);
        bell.deterministic_response = seed % 2 == 0;
        const auto b = sample_causal_model(scenario::bell(), bell, seed);
        worst_chsh = std::max(worst_chsh, chsh(behavior_from_distribution(b, {"X", "Y"}, {"A", "B"})));
    }
    o.require(slack_theta >= -1e-9, "I <= Theta");
    o.require(slack_h >= -1e-9, "I <= H(inputs|R)");
    o.require(worst_chsh <= 2.0 + 1e-9, "Bell CHSH");
    o.detail << "min Theta slack " << slack_theta << ", min H slack " << slack_h << ", max CHSH " << worst_chsh;
}

void figure7(Outcome& o)
{
    const auto rows = figure7_curves(1001);
    double pc = -1.0;
    double pm = -1.0;
    for (const auto& r : rows) {
        if (r.mermin_mi < r.chsh_mi || r.chsh_mi < pc || r.mermin_mi < pm) {
            o.require(false, "dominance or monotonicity");
            break;
        }
        pc = r.chsh_mi;
        pm = r.mermin_mi;
    }
    o.require(std::abs(rows.back().chsh_mi - 0.0463) < 1e-4, "CHSH endpoint");
    o.detail << rows.size() << " rows, CHSH endpoint " << rows.back().chsh_mi;
}

void networks(Outcome& o)
{
    const auto f = fritz_distribution(0.8);
    const auto m = merge_variables(f, {{"alpha", {"a", "x"}}, {"beta", {"b", "y"}}, {"R", {"r0", "r1"}}});
    const auto back = split_variable(
        split_variable(split_variable(m, "R", {{"r0", 2}, {"r1", 2}}), "beta", {{"b", 2}, {"y", 2}}), "alpha",
        {{"a", 2}, {"x", 2}});
    o.require(back == f, "Fritz merge/split round trip");
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        SampleOptions opt;
        opt.cardinalities["R"] = 1 + static_cast<int>(seed % 3);
        opt.cardinalities["X"] = 2 + static_cast<int>(seed % 2);
        const auto d = sample_causal_model(scenario::bell_md_aux(), opt, seed);
        const auto g = merge_variables(d, {{"G", {"X", "R"}}});
        const int cx = d.variables()[d.index_of("X")].cardinality;
        const int cr = d.variables()[d.index_of("R")].cardinality;
        const auto r = reorder(split_variable(g, "G", {{"X", cx}, {"R", cr}}), d.names());
        o.require(r == d, "random round trip seed " + std::to_string(seed));
    }
    o.require(isomorphic(scenario::twos_and_n(2), scenario::cyclic(3)), "twos_and_n(2) ~ cyclic(3)");
    o.require(isomorphic(scenario::cyclic(3), scenario::triangle()), "cyclic(3) ~ triangle");
    const double q = bilocality(bilocality_quantum_behavior()).value;
    o.require(q > 2.0, "quantum bilocality");
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
        SampleOptions opt;
        opt.cardinalities["Lambda1"] = 2 + static_cast<int>(seed % 3);
        opt.cardinalities["Lambda2"] = 2 + static_cast<int>(seed / 3 % 3);
        opt.deterministic_response = seed % 2 == 0;
        const auto d = sample_causal_model(scenario::nlocality_chain(2), opt, seed);
        worst = std::max(worst, bilocality(behavior_from_distribution(d, {"X1", "X3"}, {"A1", "A2", "A3"})).value);
    }
    o.require(worst <= 2.0 + 1e-9, "classical bilocal samples");
    o.detail << "quantum " << q << ", classical max " << worst;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"Lemma 1 exact LP", lemma1},
        {"MI lower bound certificate and Lemma 2 step", mi_and_lemma2},
        {"formula checkpoints", formulas},
        {"classical bounds by exhaustive oracle", oracles},
        {"Fritz distribution", fritz},
        {"Appendix A tightness", appendix_a},
        {"Appendix B lift", appendix_b},
        {"soundness sweep", soundness},
        {"Fig. 7 reproduction", figure7},
        {"network mappings", networks},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        double t = 0.0;
        try {
            t = timed([&] { criteria[i].second(o); });
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        failures += o.pass ? 0 : 1;
        std::printf("criterion %zu %s: %s (%s; %.2f s)\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.str().c_str(), t);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
