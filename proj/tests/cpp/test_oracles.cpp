#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "gen.hpp"
#include "mdnet/error.hpp"
#include "mdnet/md_bounds.hpp"
#include "mdnet/oracles.hpp"

using namespace mdnet;

namespace {

const double kSqrt2 = std::sqrt(2.0);

double seconds_of(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Two-party model where Lambda copies (x, y) and the strategy for each copy
// answers with a xor b = x and y.
MdModel full_dependence_model()
{
    MdModel m;
    m.inputs = party_inputs(2);
    m.outputs = party_outputs(2, 2);
    m.p_lambda = {0.25, 0.25, 0.25, 0.25};
    for (int l = 0; l < 4; ++l) {
        std::vector<double> row(4, 0.0);
        row[static_cast<std::size_t>(l)] = 1.0;
        m.p_inputs_given_lambda.push_back(row);
        const int x = l >> 1;
        const int y = l & 1;
        DeterministicStrategy s;
        s.responses = {{0, 0}, {0, 0}};
        s.responses[1][static_cast<std::size_t>(y)] = x & y;
        m.strategies.push_back(s);
    }
    return m;
}

MdModel independent_model(gen::SplitMix& r, int parties, std::size_t lambdas)
{
    MdModel m;
    m.inputs = party_inputs(parties);
    m.outputs = party_outputs(parties, 2);
    m.p_lambda = gen::simplex(r, lambdas);
    const auto px = gen::simplex(r, std::size_t{1} << parties);
    for (std::size_t l = 0; l < lambdas; ++l) {
        m.p_inputs_given_lambda.push_back(px);
        DeterministicStrategy s;
        for (int p = 0; p < parties; ++p)
            s.responses.push_back({r.below(2), r.below(2)});
        m.strategies.push_back(s);
    }
    return m;
}

} // namespace

TEST(Oracle, DeterministicMaxima)
{
    const struct {
        const char* name;
        std::size_t count;
    } cases[] = {{"chsh", 16}, {"mermin", 64}, {"cglmp:2", 16}, {"cglmp:3", 81}, {"cglmp:4", 256}};
    for (const auto& c : cases) {
        const auto f = parse_functional(c.name);
        OracleMax m;
        const double secs = seconds_of([&] { m = max_over_deterministic(f); });
        EXPECT_EQ(m.value, 2.0) << c.name;
        EXPECT_EQ(m.strategies, c.count) << c.name;
        EXPECT_EQ(evaluate(f, deterministic_behavior(m.argmax, 2, f.outcomes())), m.value) << c.name;
        EXPECT_LT(secs, 10.0) << c.name;
    }
    EXPECT_THROW(max_over_deterministic(parse_functional("cglmp:5")), CapacityError);
    EXPECT_THROW(parse_functional("bogus"), ArgumentError);
}

TEST(Oracle, EnumerationOrderAndCap)
{
    const auto all = enumerate_strategies(2, 2, 2);
    ASSERT_EQ(all.size(), 16u);
    EXPECT_EQ(all.front().responses, (std::vector<std::vector<int>>{{0, 0}, {0, 0}}));
    EXPECT_EQ(all[1].responses, (std::vector<std::vector<int>>{{0, 0}, {0, 1}}));
    EXPECT_EQ(all.back().responses, (std::vector<std::vector<int>>{{1, 1}, {1, 1}}));
    EXPECT_THROW(enumerate_strategies(3, 2, 11), CapacityError);
}

TEST(BehaviorOf, MeasurementIndependent)
{
    gen::SplitMix r(4);
    for (int k = 0; k < 20; ++k) {
        const auto m = independent_model(r, 2, 1 + static_cast<std::size_t>(r.below(5)));
        const auto mb = behavior_of(m);
        EXPECT_NEAR(l1_md_measure(mb.inputs_lambda, {"x", "y"}, "Lambda"), 0.0, 1e-12);
        EXPECT_NEAR(model_mutual_information(m), 0.0, 1e-12);
        EXPECT_LE(chsh(mb.behavior), 2.0 + 1e-12);
    }
}

TEST(BehaviorOf, FullDependenceReachesFour)
{
    const auto m = full_dependence_model();
    const auto mb = behavior_of(m);
    EXPECT_NEAR(chsh(mb.behavior), 4.0, 1e-12);
    EXPECT_NEAR(model_mutual_information(m), 2.0, 1e-12);
    EXPECT_FALSE(is_no_signaling(mb.behavior).ok);
}

TEST(BehaviorOf, RowsNormalized)
{
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto m = random_md_model(2 + static_cast<int>(seed % 2), 1 + seed % 7, seed);
        EXPECT_NO_THROW(m.validate());
        const auto mb = behavior_of(m);
        for (std::size_t x = 0; x < mb.behavior.num_input_cells(); ++x) {
            double s = 0.0;
            for (double p : mb.behavior.slice(x))
                s += p;
            EXPECT_NEAR(s, 1.0, 1e-12);
        }
    }
}

TEST(BehaviorOf, RejectsBadModels)
{
    auto m = full_dependence_model();
    m.p_inputs_given_lambda[0][0] = 0.5;
    EXPECT_THROW(m.validate(), ArgumentError);
    auto n = full_dependence_model();
    n.strategies.pop_back();
    EXPECT_THROW(n.validate(), ArgumentError);
}

TEST(AppendixA, Examples)
{
    EXPECT_NEAR(model_mutual_information(mermin_optimal_md_model(2.0, MerminMode::Uniform8)), 0.0, 1e-12);
    const auto m4 = mermin_optimal_md_model(4.0, MerminMode::Uniform8);
    EXPECT_NEAR(model_mutual_information(m4), 1 - 0.5 * std::log2(3.0), 1e-9);
    EXPECT_NEAR(model_mutual_information(m4), 0.207519, 1e-6);
    const auto m3 = mermin_optimal_md_model(3.0, MerminMode::Odd4);
    EXPECT_NEAR(model_mutual_information(m3), mermin_mi_lower(3.0, MerminMode::Odd4), 1e-6);
    EXPECT_THROW(mermin_optimal_md_model(1.9, MerminMode::Uniform8), ArgumentError);
    EXPECT_THROW(mermin_optimal_md_model(4.1, MerminMode::Odd4), ArgumentError);
}

class AppendixATightness : public ::testing::TestWithParam<int> {};

TEST_P(AppendixATightness, ValueAndInformationMatch)
{
    const double m = 2.0 + GetParam() / 50.0;
    for (auto mode : {MerminMode::Uniform8, MerminMode::Odd4}) {
        const auto model = mermin_optimal_md_model(m, mode);
        EXPECT_NO_THROW(model.validate());
        EXPECT_EQ(model.lambdas(), 8u);
        EXPECT_NEAR(mermin(behavior_of(model).behavior), m, 1e-6) << to_string(mode);
        EXPECT_NEAR(model_mutual_information(model), mermin_mi_lower(m, mode), 1e-6) << to_string(mode);
    }
}

INSTANTIATE_TEST_SUITE_P(Grid, AppendixATightness, ::testing::Range(0, 101));

TEST(AppendixB, SignalingModelLifted)
{
    const auto model = mermin_optimal_md_model(3.4, MerminMode::Uniform8);
    const auto before = behavior_of(model).behavior;
    EXPECT_FALSE(is_no_signaling(before).ok);
    const auto lifted = nosignaling_lift(model);
    const auto after = behavior_of(lifted).behavior;
    EXPECT_NEAR(mermin(after), 3.4, 1e-9);
    const auto ns = is_no_signaling(after);
    EXPECT_TRUE(ns.ok);
    EXPECT_LT(ns.worst_violation, 1e-12);
    EXPECT_NEAR(model_mutual_information(lifted), model_mutual_information(model), 1e-9);
}

TEST(AppendixB, AllZeroOutputs)
{
    gen::SplitMix r(8);
    auto m = independent_model(r, 3, 2);
    for (auto& s : m.strategies)
        s.responses = {{0, 0}, {0, 0}, {0, 0}};
    const auto lifted = nosignaling_lift(m);
    EXPECT_NEAR(model_mutual_information(lifted), model_mutual_information(m), 1e-12);
    const auto exact = exact_behavior_of(lifted);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                EXPECT_EQ(exact_correlator(exact, {x, y, z}), 1);
    const auto b = behavior_of(lifted).behavior;
    for (std::size_t x = 0; x < b.num_input_cells(); ++x)
        for (std::size_t party = 0; party < 3; ++party) {
            double p0 = 0.0;
            for (std::size_t a = 0; a < b.num_output_cells(); ++a)
                if (b.output_values(a)[party] == 0)
                    p0 += b.prob_flat(a, x);
            EXPECT_NEAR(p0, 0.5, 1e-15);
        }
    EXPECT_THROW(nosignaling_lift(full_dependence_model()), ArgumentError);
}

class AppendixBProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(AppendixBProperty, LiftIsExact)
{
    const auto model = random_md_model(3, 1 + GetParam() % 6, GetParam());
    const auto lifted = nosignaling_lift(model);
    const auto eb = exact_behavior_of(model);
    const auto el = exact_behavior_of(lifted);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z)
                EXPECT_EQ(exact_correlator(el, {x, y, z}), exact_correlator(eb, {x, y, z}));
    EXPECT_TRUE(exact_no_signaling(el));
    const auto ns = is_no_signaling(behavior_of(lifted).behavior);
    EXPECT_LT(ns.worst_violation, 1e-12);
    EXPECT_NEAR(model_mutual_information(lifted), model_mutual_information(model), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Seeds, AppendixBProperty, ::testing::Range<std::uint64_t>(1, 101));

TEST(Sampler, DeterministicAndCapped)
{
    const Dag bell = scenario::bell();
    EXPECT_EQ(sample_causal_model(bell, {}, 5), sample_causal_model(bell, {}, 5));
    EXPECT_NE(sample_causal_model(bell, {}, 5), sample_causal_model(bell, {}, 6));
    SampleOptions big;
    big.cardinalities["Lambda"] = 9;
    EXPECT_THROW(sample_causal_model(bell, big, 1), CapacityError);
    SampleOptions wide;
    wide.cardinalities["Lambda"] = 8;
    wide.include_latent = true;
    const auto d = sample_causal_model(bell, wide, 1);
    EXPECT_EQ(d.variables()[0], (VariableSpec{"Lambda", 8}));
    EXPECT_EQ(sample_causal_model(bell, {}, 1).num_variables(), 4u);
}

class SamplerProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(SamplerProperty, BellSamplesAreLocal)
{
    SampleOptions opt;
    opt.cardinalities["Lambda"] = 2 + static_cast<int>(GetParam() % 7);
    opt.deterministic_response = GetParam() % 2 == 0;
    const auto d = sample_causal_model(scenario::bell(), opt, GetParam());
    EXPECT_LE(chsh(behavior_from_distribution(d, {"X", "Y"}, {"A", "B"})), 2.0 + 1e-9);
}

TEST_P(SamplerProperty, MeasurementDependenceSamplesObeyBounds)
{
    SampleOptions opt;
    opt.include_latent = true;
    opt.cardinalities["Lambda"] = 2 + static_cast<int>(GetParam() % 3);
    opt.cardinalities["R"] = 1 + static_cast<int>(GetParam() % 4);
    opt.deterministic_response = GetParam() % 3 == 0;
    const auto d = sample_causal_model(scenario::bell_md_aux(), opt, GetParam());
    const double mi = mutual_information(d, {"X", "Y"}, {"Lambda"});
    const auto obs = marginal(d, {"X", "Y", "R"});
    EXPECT_LE(mi, theta(obs).value + 1e-9);
    EXPECT_LE(mi, h_inputs_given_r(obs, {"X", "Y"}) + 1e-9);
}

TEST_P(SamplerProperty, TriangleSamplesObeyBounds)
{
    // alpha and beta play the inputs and Lambda their shared source
    SampleOptions opt;
    opt.include_latent = true;
    opt.cardinalities["alpha"] = 2 + static_cast<int>(GetParam() % 3);
    opt.deterministic_response = GetParam() % 2 == 1;
    const auto d = sample_causal_model(scenario::triangle(), opt, GetParam());
    const double mi = mutual_information(d, {"alpha", "beta"}, {"Lambda"});
    EXPECT_LE(mi, theta(marginal(d, {"alpha", "beta", "R"}), "alpha", "beta").value + 1e-9);
}

TEST(Sampler, BilocalChainRoundingResidue)
{
    // J vanishes exactly here; its rounding residue must not leak through the square root
    SampleOptions opt;
    opt.cardinalities["Lambda1"] = 2;
    opt.cardinalities["Lambda2"] = 2;
    opt.deterministic_response = true;
    const auto d = sample_causal_model(scenario::nlocality_chain(2), opt, 432);
    const auto v = bilocality(behavior_from_distribution(d, {"X1", "X3"}, {"A1", "A2", "A3"}));
    EXPECT_LE(v.value, 2.0 + 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Seeds, SamplerProperty, ::testing::Range<std::uint64_t>(1, 201));

TEST(Frontier, ChshAtClassicalBound)
{
    const auto r = md_frontier_search(parse_functional("chsh"), 2.0, 1000, 1);
    EXPECT_EQ(r.best_mi, 0.0);
    EXPECT_NEAR(r.achieved_value, 2.0, 1e-12);
}

TEST(Frontier, ChshTsirelson)
{
    const double target = 2 * kSqrt2;
    const auto r = md_frontier_search(parse_functional("chsh"), target);
    EXPECT_NEAR(r.achieved_value, target, 1e-9);
    EXPECT_GE(r.best_mi, chsh_mi_lower(target) - 1e-9);
    EXPECT_LE(r.best_mi, chsh_mi_lower(target) + 0.02);
    EXPECT_NEAR(model_mutual_information(r.model), r.best_mi, 1e-9);
    EXPECT_NEAR(chsh(behavior_of(r.model).behavior), r.achieved_value, 1e-9);
}

TEST(Frontier, MerminAlgebraicMaximum)
{
    const auto r = md_frontier_search(parse_functional("mermin"), 4.0);
    const double bound = mermin_mi_lower(4.0, MerminMode::Uniform8);
    EXPECT_GE(r.best_mi, bound - 1e-9);
    EXPECT_NEAR(r.best_mi, bound, 1e-6);
}

TEST(Frontier, NeverBelowAnalyticCurve)
{
    for (double v : {2.2, 2.6, 3.0, 3.6}) {
        const auto r = md_frontier_search(parse_functional("chsh"), v, 5000, 3);
        EXPECT_GE(r.best_mi, chsh_mi_lower(v) - 1e-9) << v;
    }
    for (double v : {2.5, 3.0, 3.5}) {
        const auto r = md_frontier_search(parse_functional("mermin"), v, 5000, 3);
        EXPECT_GE(r.best_mi, mermin_mi_lower(v, MerminMode::Uniform8) - 1e-9) << v;
    }
    EXPECT_THROW(md_frontier_search(parse_functional("chsh"), 4.5, 10, 1), ArgumentError);
    EXPECT_THROW(md_frontier_search(parse_functional("cglmp:3"), 2.5, 10, 1), ArgumentError);
}

TEST(Rng, Reproducible)
{
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(a.bits(), b.bits());
    Rng c(7);
    const auto s = c.simplex(10);
    double t = 0.0;
    for (double v : s) {
        EXPECT_GE(v, 0.0);
        t += v;
    }
    EXPECT_NEAR(t, 1.0, 1e-12);
}
