#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "mdnet/error.hpp"
#include "mdnet/md_bounds.hpp"
#include "mdnet/quantum_sim.hpp"

using namespace mdnet;

namespace {

const double kSqrt2 = std::sqrt(2.0);

double s_log(double x) { return x == 0.0 ? 0.0 : x * std::log2(x); }

double theta_closed(double v)
{
    return 2 - (s_log((v - 1) * (v - 1)) + s_log((v + 1) * (v + 1)) + s_log(1 - v * v)) / 4;
}

CMatrix ket_bra(int dim, int i)
{
    CMatrix m = CMatrix::Zero(dim, dim);
    m(i, i) = 1.0;
    return m;
}

double total(const Distribution& d)
{
    double s = 0.0;
    for (double p : d.table()) {
        EXPECT_GE(p, 0.0);
        s += p;
    }
    return s;
}

} // namespace

TEST(Kron, Examples)
{
    EXPECT_TRUE(kron(pauli::I(), pauli::I()).isApprox(CMatrix::Identity(4, 4)));
    const CMatrix p01 = kron(ket_bra(2, 0), ket_bra(2, 1));
    EXPECT_TRUE(p01.isApprox(ket_bra(4, 1)));
    const auto ev = hermitian_eigenvalues(kron(pauli::Z(), pauli::Z()));
    ASSERT_EQ(ev.size(), 4);
    EXPECT_NEAR(ev[0], -1, 1e-12);
    EXPECT_NEAR(ev[1], -1, 1e-12);
    EXPECT_NEAR(ev[2], 1, 1e-12);
    EXPECT_NEAR(ev[3], 1, 1e-12);
    std::vector<CMatrix> ten(10, pauli::I());
    EXPECT_EQ(kron(ten).rows(), 1024);
    ten.push_back(pauli::I());
    EXPECT_THROW(kron(ten), CapacityError);
}

TEST(DensityMatrix, Validation)
{
    EXPECT_THROW(DensityMatrix(ket_bra(2, 0) * 2.0), ArgumentError);
    CMatrix nonherm = ket_bra(2, 0);
    nonherm(0, 1) = 0.3;
    EXPECT_THROW(DensityMatrix{nonherm}, ArgumentError);
    CMatrix negative = ket_bra(2, 0) * 1.5 - ket_bra(2, 1) * 0.5;
    EXPECT_THROW(DensityMatrix{negative}, ArgumentError);
    EXPECT_NO_THROW(isotropic_state(0.3));
    EXPECT_THROW(isotropic_state(1.2), ArgumentError);
}

TEST(Povm, Validation)
{
    EXPECT_THROW(Povm({ket_bra(2, 0)}), ArgumentError);
    EXPECT_THROW(Povm({ket_bra(2, 0) * 2.0, ket_bra(2, 1) - ket_bra(2, 0)}), ArgumentError);
    const Povm z = Povm::observable(pauli::Z());
    ASSERT_EQ(z.size(), 2u);
    EXPECT_TRUE(z[0].isApprox(ket_bra(2, 0)));
    EXPECT_TRUE((z[0] + z[1]).isApprox(CMatrix::Identity(2, 2)));
    const Povm bsm = Povm::basis({phi_plus(), CVector::Unit(4, 1), CVector::Unit(4, 2),
                                  (CVector(4) << 1, 0, 0, -1).finished() / kSqrt2});
    EXPECT_EQ(bsm.size(), 4u);
}

TEST(Born, MaximallyMixedQubit)
{
    const auto d = born_joint({{DensityMatrix::maximally_mixed(2), {2}, {0}}},
                              {{{{"a", 2}}, Povm::observable(pauli::Z())}});
    EXPECT_NEAR(d.table()[0], 0.5, 1e-12);
    EXPECT_NEAR(d.table()[1], 0.5, 1e-12);
}

TEST(Born, PhiPlusZZ)
{
    const auto d = born_joint({{DensityMatrix::pure(phi_plus()), {2, 2}, {0, 1}}},
                              {{{{"a", 2}}, Povm::observable(pauli::Z())}, {{{"b", 2}}, Povm::observable(pauli::Z())}});
    EXPECT_NEAR(d.table()[0], 0.5, 1e-12);
    EXPECT_NEAR(d.table()[1], 0.0, 1e-12);
    EXPECT_NEAR(d.table()[2], 0.0, 1e-12);
    EXPECT_NEAR(d.table()[3], 0.5, 1e-12);
}

TEST(Born, WiringMismatch)
{
    EXPECT_THROW(born_joint({{DensityMatrix::pure(phi_plus()), {2, 2}, {0, 2}}},
                            {{{{"a", 2}}, Povm::observable(pauli::Z())}, {{{"b", 2}}, Povm::observable(pauli::Z())}}),
                 ArgumentError);
    EXPECT_THROW(born_joint({{DensityMatrix::pure(phi_plus()), {2, 2}, {0, 0}}},
                            {{{{"a", 2}}, Povm::observable(pauli::Z())}}),
                 ArgumentError);
    EXPECT_THROW(born_joint({{DensityMatrix::pure(phi_plus()), {2, 2}, {0, 1}}},
                            {{{{"a", 3}}, Povm::observable(pauli::Z())}, {{{"b", 2}}, Povm::observable(pauli::Z())}}),
                 ArgumentError);
}

TEST(Fritz, PerfectVisibility)
{
    const auto d = fritz_distribution(1.0);
    EXPECT_NEAR(total(d), 1.0, 1e-10);
    const auto xr0 = marginal(d, {"x", "r0"});
    EXPECT_NEAR(xr0.table()[0] + xr0.table()[3], 1.0, 1e-12);
    const auto yr1 = marginal(d, {"y", "r1"});
    EXPECT_NEAR(yr1.table()[0] + yr1.table()[3], 1.0, 1e-12);
    EXPECT_NEAR(theta(d, "x", "y", {"r0", "r1"}).value, 0.0, 1e-12);
    EXPECT_NEAR(fritz_theta_distribution(1.0), 0.0, 1e-12);
    EXPECT_NEAR(chsh(fritz_conditional(1.0)), 2 * kSqrt2, 1e-12);
}

TEST(Fritz, MaximallyMixed)
{
    const auto d = fritz_distribution(0.0);
    for (double p : d.table())
        EXPECT_NEAR(p, 1.0 / 64, 1e-12);
    EXPECT_NEAR(theta(d, "x", "y", {"r0", "r1"}).value, 2.0, 1e-12);
}

TEST(Fritz, CorrelatorsMatchClosedForm)
{
    // E(x, y) = v cos(alpha_x - beta_y) for Phi+ and observables in the x-z plane
    const double alpha[2] = {0.0, std::numbers::pi / 2};
    const double beta[2] = {std::numbers::pi / 4, -std::numbers::pi / 4};
    for (double v : {0.0, 0.3, 0.8, 1.0}) {
        const Behavior b = fritz_conditional(v);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                EXPECT_NEAR(correlator(b, {x, y}), v * std::cos(alpha[x] - beta[y]), 1e-12);
        EXPECT_TRUE(is_no_signaling(b).ok);
    }
}

TEST(Fritz, VisibilityRange)
{
    EXPECT_THROW(fritz_distribution(-0.1), ArgumentError);
    EXPECT_THROW(fritz_distribution(1.1), ArgumentError);
}

TEST(ThetaFormula, Examples)
{
    EXPECT_NEAR(fritz_theta_paper_formula(1.0), 0.0, 1e-15);
    EXPECT_NEAR(fritz_theta_paper_formula(0.0), 2.0, 1e-15);
    EXPECT_NEAR(fritz_theta_paper_formula(0.5), 1.54474, 1e-5);
    for (int i = 0; i <= 100; ++i) {
        const double v = i / 100.0;
        EXPECT_NEAR(fritz_theta_paper_formula(v), theta_closed(v), 1e-14) << v;
    }
}

TEST(ThetaFormula, GoldenValues)
{
    EXPECT_NEAR(fritz_theta_paper_formula(0.5), 1.5447367178, 1e-9);
    EXPECT_NEAR(fritz_theta_distribution(0.5), 1.6225562489, 1e-9);
}

TEST(CriticalVisibility, Examples)
{
    const auto formula = critical_visibility(ThetaSource::PaperFormula, BoundKind::Mi);
    ASSERT_TRUE(formula.has_value());
    EXPECT_NEAR(*formula, 0.994, 1e-3);
    EXPECT_NEAR(*formula, 0.993286, 1e-6);

    const auto dist = critical_visibility(ThetaSource::Distribution, BoundKind::Mi);
    ASSERT_TRUE(dist.has_value());
    EXPECT_GT(*dist, 0.99);
    EXPECT_LT(*dist, 1.0);
    EXPECT_NEAR(*dist, 0.995643, 1e-6);

    const auto zero = critical_visibility(ThetaSource::Zero, BoundKind::L1);
    ASSERT_TRUE(zero.has_value());
    EXPECT_NEAR(*zero, 1 / kSqrt2, 1e-6);

    // the margin changes sign at the reported value
    EXPECT_GT(fritz_margin(*formula, ThetaSource::PaperFormula, BoundKind::Mi), 0.0);
    EXPECT_LT(fritz_margin(*formula - 2e-6, ThetaSource::PaperFormula, BoundKind::Mi), 0.0);
}

TEST(CriticalVisibility, Parsing)
{
    EXPECT_EQ(parse_theta_source("paper-formula"), ThetaSource::PaperFormula);
    EXPECT_EQ(parse_theta_source("distribution"), ThetaSource::Distribution);
    EXPECT_EQ(parse_bound_kind("l1"), BoundKind::L1);
    EXPECT_THROW(parse_theta_source("guess"), ArgumentError);
    EXPECT_THROW(parse_bound_kind("l2"), ArgumentError);
}

TEST(Ghz, MerminBehavior)
{
    const Behavior b = ghz_mermin_behavior();
    EXPECT_NEAR(mermin(b), 4.0, 1e-12);
    EXPECT_TRUE(is_no_signaling(b).ok);
    for (std::size_t x = 0; x < b.num_input_cells(); ++x) {
        for (std::size_t party = 0; party < 3; ++party) {
            double p0 = 0.0;
            for (std::size_t a = 0; a < b.num_output_cells(); ++a)
                if (b.output_values(a)[party] == 0)
                    p0 += b.prob_flat(a, x);
            EXPECT_NEAR(p0, 0.5, 1e-12);
        }
    }
}

TEST(Bilocality, EntanglementSwapping)
{
    const Behavior b = bilocality_quantum_behavior();
    EXPECT_EQ(b.outputs()[1].cardinality, 4);
    const auto v = bilocality(b, MiddleMode::SplitBit);
    EXPECT_GT(v.value, 2.0);
    EXPECT_NEAR(v.value, 2 * kSqrt2, 1e-12);
    EXPECT_TRUE(is_no_signaling(b).ok);
    for (std::size_t x = 0; x < b.num_input_cells(); ++x) {
        double p1 = 0.0;
        double p3 = 0.0;
        for (std::size_t a = 0; a < b.num_output_cells(); ++a) {
            const auto ov = b.output_values(a);
            p1 += ov[0] == 0 ? b.prob_flat(a, x) : 0.0;
            p3 += ov[2] == 0 ? b.prob_flat(a, x) : 0.0;
        }
        EXPECT_NEAR(p1, 0.5, 1e-12);
        EXPECT_NEAR(p3, 0.5, 1e-12);
    }
}

class QuantumProperties : public ::testing::TestWithParam<int> {};

TEST_P(QuantumProperties, ValidAndUniformInputs)
{
    const double v = GetParam() / 40.0;
    const auto d = fritz_distribution(v);
    EXPECT_NEAR(total(d), 1.0, 1e-10);
    const auto xy = marginal(d, {"x", "y"});
    for (double p : xy.table())
        EXPECT_NEAR(p, 0.25, 1e-12);
    EXPECT_NEAR(chsh(fritz_conditional(v)), 2 * kSqrt2 * v, 1e-9);
    const double th = fritz_theta_distribution(v);
    EXPECT_GE(th, -1e-12);
    EXPECT_LE(th, 2.0 + 1e-12);
    const auto rho = isotropic_state(v);
    EXPECT_GE(hermitian_eigenvalues(rho.matrix()).minCoeff(), -1e-12);
}

INSTANTIATE_TEST_SUITE_P(Visibilities, QuantumProperties, ::testing::Range(0, 41));

TEST(QuantumProperties, RandomPureStatesGiveValidTables)
{
    gen::SplitMix r(17);
    for (int k = 0; k < 50; ++k) {
        CVector psi(4);
        for (int i = 0; i < 4; ++i)
            psi[i] = Complex(r.unit() - 0.5, r.unit() - 0.5);
        const auto d = born_joint(
            {{DensityMatrix::pure(psi), {2, 2}, {0, 1}}},
            {{{{"a", 2}}, Povm::observable(pauli::X())}, {{{"b", 2}}, Povm::observable(pauli::Y())}});
        EXPECT_NEAR(total(d), 1.0, 1e-10);
    }
}
