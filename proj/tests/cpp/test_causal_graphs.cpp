#include <gtest/gtest.h>

#include <algorithm>

#include "gen.hpp"
#include "mdnet/causal_graphs.hpp"
#include "mdnet/cone_engine.hpp"
#include "mdnet/error.hpp"
#include "mdnet/quantum_sim.hpp"

using namespace mdnet;

namespace {

VarSet sorted(VarSet v)
{
    std::sort(v.begin(), v.end());
    return v;
}

bool has_statement(const std::vector<CiStatement>& all, const VarSet& a, const VarSet& b, const VarSet& c)
{
    for (const auto& s : all)
        if (sorted(s.a) == sorted(a) && sorted(s.b) == sorted(b) && sorted(s.c) == sorted(c))
            return true;
    return false;
}

} // namespace

TEST(Dag, RejectsInvalidGraphs)
{
    EXPECT_THROW(Dag({{"A", false}, {"A", false}}, {}), ArgumentError);
    EXPECT_THROW(Dag({{"A", false}}, {{"A", "B"}}), NameError);
    EXPECT_THROW(Dag({{"A", false}, {"B", false}}, {{"A", "B"}, {"B", "A"}}), ArgumentError);
    EXPECT_THROW(Dag({{"A", false}}, {{"A", "A"}}), ArgumentError);
}

TEST(LocalMarkov, MeasurementDependenceDag)
{
    const auto cis = local_markov_constraints(scenario::bell_md_aux());
    EXPECT_TRUE(has_statement(cis, {"R"}, {"X", "Y", "Lambda"}, {"Ux", "Uy"}));
}

TEST(LocalMarkov, Chain)
{
    Dag chain({{"A", false}, {"B", false}, {"C", false}}, {{"A", "B"}, {"B", "C"}});
    EXPECT_TRUE(has_statement(local_markov_constraints(chain), {"C"}, {"A"}, {"B"}));
}

TEST(LocalMarkov, FullyConnectedIsEmpty)
{
    Dag full({{"A", false}, {"B", false}, {"C", false}}, {{"A", "B"}, {"A", "C"}, {"B", "C"}});
    EXPECT_TRUE(local_markov_constraints(full).empty());
}

TEST(LocalMarkov, StableAcrossRuns)
{
    for (const auto& name : scenario::names()) {
        const Dag d = scenario::by_name(name, 3);
        EXPECT_EQ(local_markov_constraints(d), local_markov_constraints(scenario::by_name(name, 3))) << name;
    }
}

TEST(SourceIndependence, ThreeSources)
{
    for (const Dag& d : {scenario::bell_md_aux(), scenario::triangle()}) {
        const EntropySpace s(d.names());
        LinForm expected = EntropyExpr::H(s, {"Ux", "Uy", "Lambda"});
        expected -= EntropyExpr::H(s, {"Ux"});
        expected -= EntropyExpr::H(s, {"Uy"});
        expected -= EntropyExpr::H(s, {"Lambda"});
        EXPECT_EQ(canonical(source_independence_constraint(d, s), true), canonical(expected, true));
    }
}

TEST(SourceIndependence, TwoSourcesAndErrors)
{
    Dag two({{"L1", true}, {"L2", true}, {"A", false}}, {{"L1", "A"}, {"L2", "A"}});
    const EntropySpace s(two.names());
    LinForm expected = EntropyExpr::H(s, {"L1", "L2"}) - EntropyExpr::H(s, {"L1"}) - EntropyExpr::H(s, {"L2"});
    EXPECT_EQ(canonical(source_independence_constraint(two, s), true), canonical(expected, true));
    EXPECT_THROW(source_independence_constraint(scenario::bell()), ArgumentError);
}

TEST(Scenarios, TriangleShape)
{
    const Dag t = scenario::triangle();
    EXPECT_EQ(t.latent().size(), 3u);
    EXPECT_EQ(sorted(t.observed()), sorted({"alpha", "beta", "R"}));
    for (const auto& src : t.latent())
        EXPECT_EQ(t.children(src).size(), 2u);
    // every pair of observed nodes shares exactly one source
    const VarSet obs = t.observed();
    for (std::size_t i = 0; i < obs.size(); ++i)
        for (std::size_t j = i + 1; j < obs.size(); ++j) {
            int shared = 0;
            for (const auto& p : t.parents(obs[i]))
                for (const auto& q : t.parents(obs[j]))
                    shared += p == q;
            EXPECT_EQ(shared, 1);
        }
}

TEST(Scenarios, NetworkIsomorphisms)
{
    EXPECT_TRUE(isomorphic(scenario::twos_and_n(2), scenario::triangle()));
    EXPECT_TRUE(isomorphic(scenario::cyclic(3), scenario::triangle()));
    EXPECT_TRUE(isomorphic(scenario::twos_and_n(2), scenario::cyclic(3)));
    EXPECT_FALSE(isomorphic(scenario::cyclic(4), scenario::triangle()));
    EXPECT_FALSE(isomorphic(scenario::bell(), scenario::triangle()));
}

TEST(Scenarios, CapacityLimits)
{
    EXPECT_THROW(scenario::cyclic(9), CapacityError);
    EXPECT_THROW(scenario::twos_and_n(9), CapacityError);
    EXPECT_THROW(scenario::nlocality_chain(9), CapacityError);
    EXPECT_NO_THROW(scenario::cyclic(8));
}

TEST(Scenarios, DocumentedNames)
{
    EXPECT_EQ(scenario::bell().names(), (VarSet{"Lambda", "X", "Y", "A", "B"}));
    EXPECT_EQ(scenario::bell_md_aux().names(), (VarSet{"Ux", "Uy", "Lambda", "X", "Y", "R"}));
    const Dag c4 = scenario::cyclic(4);
    for (const char* n : {"U1", "U2", "Lambda1", "Lambda2", "alpha1", "alpha2", "alpha3", "R"})
        EXPECT_TRUE(c4.has(n)) << n;
    const Dag ch = scenario::nlocality_chain(2);
    for (const char* n : {"Lambda1", "Lambda2", "X1", "X3", "A1", "A2", "A3"})
        EXPECT_TRUE(ch.has(n)) << n;
}

TEST(Merge, CompositeOfTwoBits)
{
    gen::SplitMix r(5);
    const auto d = gen::named(r, {{"A", 2}, {"X", 2}, {"B", 2}});
    const auto m = merge_variables(d, {{"alpha", {"A", "X"}}});
    ASSERT_EQ(m.variables()[0].name, "alpha");
    EXPECT_EQ(m.variables()[0].cardinality, 4);
    EXPECT_NEAR(entropy(m, {"alpha"}), entropy(d, {"A", "X"}), 1e-12);
    const auto back = split_variable(m, "alpha", {{"A", 2}, {"X", 2}});
    EXPECT_EQ(back, d);
    EXPECT_THROW(split_variable(m, "alpha", {{"A", 2}, {"X", 3}}), ArgumentError);
    EXPECT_THROW(merge_variables(d, {{"g1", {"A", "X"}}, {"g2", {"X", "B"}}}), ArgumentError);
}

TEST(Merge, MixedRadixFirstMemberMostSignificant)
{
    std::vector<double> t(6, 0.0);
    t[1 * 3 + 2] = 1.0; // A=1, X=2
    Distribution d({{"A", 2}, {"X", 3}}, t);
    const auto m = merge_variables(d, {{"g", {"A", "X"}}});
    EXPECT_EQ(m.table()[5], 1.0);
}

TEST(Merge, FritzCompositeEntropies)
{
    const auto d = fritz_distribution(0.8);
    const auto m = merge_variables(d, {{"alpha", {"a", "x"}}, {"beta", {"b", "y"}}, {"R", {"r0", "r1"}}});
    const std::vector<std::pair<VarSet, VarSet>> pairs{
        {{"alpha"}, {"a", "x"}},
        {{"beta"}, {"b", "y"}},
        {{"R"}, {"r0", "r1"}},
        {{"alpha", "beta"}, {"a", "x", "b", "y"}},
        {{"alpha", "R"}, {"a", "x", "r0", "r1"}},
        {{"beta", "R"}, {"b", "y", "r0", "r1"}},
        {{"alpha", "beta", "R"}, {"a", "x", "b", "y", "r0", "r1"}},
    };
    for (const auto& [merged, members] : pairs)
        EXPECT_NEAR(entropy(m, merged), entropy(d, members), 1e-12);
    const auto back = split_variable(split_variable(split_variable(m, "R", {{"r0", 2}, {"r1", 2}}), "beta",
                                                    {{"b", 2}, {"y", 2}}),
                                     "alpha", {{"a", 2}, {"x", 2}});
    EXPECT_EQ(back, d);
}

class MergeRoundTrip : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(MergeRoundTrip, BitExact)
{
    gen::SplitMix r(GetParam());
    const int c0 = 1 + r.below(3);
    const int c1 = 1 + r.below(3);
    const int c2 = 1 + r.below(3);
    const auto d = gen::named(r, {{"P", c0}, {"Q", c1}, {"S", c2}}, true);
    const auto m = merge_variables(d, {{"G", {"S", "P"}}});
    const auto back = reorder(split_variable(m, "G", {{"S", c2}, {"P", c0}}), {"P", "Q", "S"});
    EXPECT_EQ(back, d);
    EXPECT_NEAR(entropy(m, {"G"}), entropy(d, {"S", "P"}), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, MergeRoundTrip, ::testing::Range<std::uint64_t>(1, 51));
