#include "mdnet/quantum_sim.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

#include "mdnet/error.hpp"
#include "mdnet/md_bounds.hpp"

namespace mdnet {

namespace {

constexpr double kOpTolerance = 1e-10;
constexpr double kPsdTolerance = 1e-9;

const Complex kI(0.0, 1.0);

void check_hermitian(const CMatrix& m, const char* what)
{
    if (m.rows() != m.cols() || m.rows() == 0)
        throw ArgumentError(std::string(what) + " must be a nonempty square matrix");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kOpTolerance)
        throw ArgumentError(std::string(what) + " is not Hermitian");
}

double entropy_s(double x) { return x <= 0.0 ? 0.0 : x * std::log2(x); }

} // namespace

namespace pauli {
CMatrix I() { return CMatrix::Identity(2, 2); }
CMatrix X()
{
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
CMatrix Y()
{
    CMatrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}
CMatrix Z()
{
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
} // namespace pauli

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

DensityMatrix::DensityMatrix(CMatrix rho) : rho_(std::move(rho))
{
    check_hermitian(rho_, "density matrix");
    if (std::abs(rho_.trace() - Complex(1.0)) > kOpTolerance)
        throw ArgumentError("density matrix must have unit trace");
    if (hermitian_eigenvalues(rho_).minCoeff() < -kPsdTolerance)
        throw ArgumentError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure(const CVector& psi)
{
    const double n = psi.norm();
    if (n == 0.0)
        throw ArgumentError("zero state vector");
    const CVector u = psi / n;
    return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(int dim)
{
    if (dim < 1)
        throw ArgumentError("dimension must be positive");
    return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

Povm::Povm(std::vector<CMatrix> elements) : elements_(std::move(elements))
{
    if (elements_.empty())
        throw ArgumentError("POVM needs at least one element");
    const auto d = elements_.front().rows();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& e : elements_) {
        check_hermitian(e, "POVM element");
        if (e.rows() != d)
            throw ArgumentError("POVM elements differ in dimension");
        if (hermitian_eigenvalues(e).minCoeff() < -kPsdTolerance)
            throw ArgumentError("POVM element is not positive semidefinite");
        sum += e;
    }
    if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > kOpTolerance)
        throw ArgumentError("POVM elements do not sum to the identity");
}

Povm Povm::observable(const CMatrix& o)
{
    const CMatrix id = CMatrix::Identity(o.rows(), o.cols());
    return Povm({(id + o) / 2.0, (id - o) / 2.0});
}

Povm Povm::basis(const std::vector<CVector>& vectors)
{
    std::vector<CMatrix> e;
    for (const auto& v : vectors)
        e.push_back(v * v.adjoint());
    return Povm(std::move(e));
}

CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
    const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
    if (rows > kMaxHilbertDim || cols > kMaxHilbertDim)
        throw CapacityError("tensor product dimension exceeds 1024");
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

CMatrix kron(const std::vector<CMatrix>& ops)
{
    CMatrix out = CMatrix::Identity(1, 1);
    for (const auto& o : ops)
        out = kron(out, o);
    return out;
}

DensityMatrix kron(const std::vector<DensityMatrix>& states)
{
    std::vector<CMatrix> m;
    for (const auto& s : states)
        m.push_back(s.matrix());
    return DensityMatrix(kron(m));
}

CVector phi_plus()
{
    CVector v = CVector::Zero(4);
    v(0) = v(3) = 1.0 / std::numbers::sqrt2;
    return v;
}

DensityMatrix isotropic_state(double v)
{
    if (!(v >= 0.0 && v <= 1.0))
        throw ArgumentError("visibility must lie in [0, 1]");
    const CVector phi = phi_plus();
    return DensityMatrix(v * (phi * phi.adjoint()) + (1.0 - v) * CMatrix::Identity(4, 4) / 4.0);
}

Distribution born_joint(const std::vector<QuantumSource>& sources, const std::vector<QuantumParty>& parties)
{
    struct Sub {
        int dim;
        std::size_t party;
    };
    std::vector<Sub> subs;
    for (const auto& s : sources) {
        if (s.dims.size() != s.recipients.size())
            throw ArgumentError("source dims and recipients differ in length");
        long long prod = 1;
        for (std::size_t k = 0; k < s.dims.size(); ++k) {
            if (s.recipients[k] >= parties.size())
                throw ArgumentError("source sends a subsystem to a missing party");
            prod *= s.dims[k];
            subs.push_back({s.dims[k], s.recipients[k]});
        }
        if (prod != s.state.dim())
            throw ArgumentError("source subsystem dimensions do not match its state");
    }

    // party order of subsystems
    std::vector<std::size_t> order;
    std::vector<int> party_dim(parties.size(), 1);
    for (std::size_t p = 0; p < parties.size(); ++p)
        for (std::size_t k = 0; k < subs.size(); ++k)
            if (subs[k].party == p) {
                order.push_back(k);
                party_dim[p] *= subs[k].dim;
            }
    for (std::size_t p = 0; p < parties.size(); ++p) {
        if (parties[p].povm.dim() != party_dim[p])
            throw ArgumentError("POVM of party " + std::to_string(p) + " acts on dimension " +
                                std::to_string(parties[p].povm.dim()) + " but receives " +
                                std::to_string(party_dim[p]));
        long long c = 1;
        for (const auto& v : parties[p].outcomes)
            c *= v.cardinality;
        if (c != static_cast<long long>(parties[p].povm.size()))
            throw ArgumentError("outcome variables of party " + std::to_string(p) + " do not match its POVM size");
    }

    std::vector<DensityMatrix> states;
    for (const auto& s : sources)
        states.push_back(s.state);
    const CMatrix rho = states.empty() ? CMatrix::Identity(1, 1) : kron(states).matrix();
    const auto n = rho.rows();

    // basis index in source order -> index in party order
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::vector<int> digits(subs.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index r = i;
        for (std::size_t k = subs.size(); k-- > 0;) {
            digits[k] = static_cast<int>(r % subs[k].dim);
            r /= subs[k].dim;
        }
        Eigen::Index j = 0;
        for (std::size_t k : order)
            j = j * subs[k].dim + digits[k];
        perm[static_cast<std::size_t>(i)] = j;
    }
    CMatrix rp(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            rp(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = rho(i, j);
    const CMatrix rpt = rp.transpose();

    std::vector<VariableSpec> vars;
    for (const auto& p : parties)
        vars.insert(vars.end(), p.outcomes.begin(), p.outcomes.end());

    std::size_t total = 1;
    for (const auto& p : parties)
        total *= p.povm.size();
    std::vector<double> table(total);
    std::vector<std::size_t> idx(parties.size(), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<CMatrix> ops;
        for (std::size_t p = 0; p < parties.size(); ++p)
            ops.push_back(parties[p].povm[idx[p]]);
        const CMatrix m = kron(ops);
        double prob = rpt.cwiseProduct(m).sum().real();
        if (prob < 0.0) {
            if (prob < -1e-12)
                throw Error("negative Born probability");
            prob = 0.0;
        }
        table[flat] = prob;
        for (std::size_t p = parties.size(); p-- > 0;) {
            if (++idx[p] < parties[p].povm.size())
                break;
            idx[p] = 0;
        }
    }
    return Distribution(std::move(vars), std::move(table));
}

Behavior born_behavior(const std::vector<QuantumSource>& sources, const std::vector<QuantumSetting>& parties)
{
    std::vector<VariableSpec> inputs;
    std::vector<VariableSpec> outputs;
    std::vector<Party> party_map;
    std::vector<std::size_t> input_owner;
    for (std::size_t p = 0; p < parties.size(); ++p) {
        const auto& q = parties[p];
        if (q.settings.empty())
            throw ArgumentError("party '" + q.output + "' has no measurement");
        Party pm;
        pm.outputs.push_back(outputs.size());
        outputs.push_back({q.output, static_cast<int>(q.settings.front().size())});
        for (const auto& s : q.settings)
            if (s.size() != q.settings.front().size())
                throw ArgumentError("settings of party '" + q.output + "' differ in outcome count");
        if (q.settings.size() > 1 || q.input) {
            if (!q.input)
                throw ArgumentError("party '" + q.output + "' has several settings but no input name");
            pm.inputs.push_back(inputs.size());
            inputs.push_back({*q.input, static_cast<int>(q.settings.size())});
            input_owner.push_back(p);
        }
        party_map.push_back(pm);
    }

    std::size_t n_in = 1;
    for (const auto& v : inputs)
        n_in *= static_cast<std::size_t>(v.cardinality);
    std::vector<double> table;
    std::vector<int> x(inputs.size(), 0);
    for (std::size_t flat = 0; flat < n_in; ++flat) {
        std::vector<QuantumParty> qp;
        for (std::size_t p = 0; p < parties.size(); ++p) {
            std::size_t setting = 0;
            for (std::size_t i = 0; i < inputs.size(); ++i)
                if (input_owner[i] == p)
                    setting = static_cast<std::size_t>(x[i]);
            qp.push_back({{outputs[p]}, parties[p].settings[setting]});
        }
        const Distribution d = born_joint(sources, qp);
        table.insert(table.end(), d.table().begin(), d.table().end());
        for (std::size_t i = inputs.size(); i-- > 0;) {
            if (++x[i] < inputs[i].cardinality)
                break;
            x[i] = 0;
        }
    }
    return Behavior(std::move(inputs), std::move(outputs), std::move(table), std::nullopt, std::move(party_map));
}

Distribution fritz_distribution(double v)
{
    const DensityMatrix rho = isotropic_state(v);
    // sources: AB -> (Alice, Bob), XR0 -> (Alice, R), YR1 -> (Bob, R)
    std::vector<QuantumSource> sources{
        {rho, {2, 2}, {0, 1}},
        {rho, {2, 2}, {0, 2}},
        {rho, {2, 2}, {1, 2}},
    };
    const Povm zm = Povm::observable(pauli::Z());
    const CMatrix a_obs[2] = {pauli::Z(), pauli::X()};
    const CMatrix b_obs[2] = {(pauli::Z() + pauli::X()) / std::numbers::sqrt2,
                              (pauli::Z() - pauli::X()) / std::numbers::sqrt2};
    // Alice holds (A, X) in that order; outcome index a * 2 + x
    auto composite = [&](const CMatrix (&obs)[2]) {
        std::vector<CMatrix> e;
        for (int out = 0; out < 2; ++out)
            for (int in = 0; in < 2; ++in)
                e.push_back(kron(Povm::observable(obs[in])[static_cast<std::size_t>(out)], zm[static_cast<std::size_t>(in)]));
        return Povm(std::move(e));
    };
    std::vector<CMatrix> r_elems;
    for (int r0 = 0; r0 < 2; ++r0)
        for (int r1 = 0; r1 < 2; ++r1)
            r_elems.push_back(kron(zm[static_cast<std::size_t>(r0)], zm[static_cast<std::size_t>(r1)]));
    std::vector<QuantumParty> parties{
        {{{"a", 2}, {"x", 2}}, composite(a_obs)},
        {{{"b", 2}, {"y", 2}}, composite(b_obs)},
        {{{"r0", 2}, {"r1", 2}}, Povm(std::move(r_elems))},
    };
    return born_joint(sources, parties);
}

Behavior fritz_conditional(double v)
{
    return behavior_from_distribution(fritz_distribution(v), {"x", "y"}, {"a", "b"});
}

double fritz_theta_paper_formula(double v)
{
    if (!(v >= 0.0 && v <= 1.0))
        throw ArgumentError("visibility must lie in [0, 1]");
    return 2.0 - (entropy_s((v - 1) * (v - 1)) + entropy_s((v + 1) * (v + 1)) + entropy_s(1 - v * v)) / 4.0;
}

double fritz_theta_distribution(double v)
{
    return theta(fritz_distribution(v), "x", "y", {"r0", "r1"}).value;
}

ThetaSource parse_theta_source(const std::string& s)
{
    if (s == "paper-formula" || s == "paper")
        return ThetaSource::PaperFormula;
    if (s == "distribution")
        return ThetaSource::Distribution;
    if (s == "zero")
        return ThetaSource::Zero;
    throw ArgumentError("unknown theta source '" + s + "'");
}

BoundKind parse_bound_kind(const std::string& s)
{
    if (s == "mi")
        return BoundKind::Mi;
    if (s == "l1")
        return BoundKind::L1;
    throw ArgumentError("unknown bound kind '" + s + "'");
}

double fritz_margin(double v, ThetaSource source, BoundKind bound)
{
    double th = 0.0;
    switch (source) {
    case ThetaSource::PaperFormula:
        th = fritz_theta_paper_formula(v);
        break;
    case ThetaSource::Distribution:
        th = fritz_theta_distribution(v);
        break;
    case ThetaSource::Zero:
        th = 0.0;
        break;
    }
    const double c = 2.0 * std::numbers::sqrt2 * v;
    if (bound == BoundKind::Mi)
        return chsh_mi_lower(c) - th;
    return chsh_l1_lower(c) - pinsker_mi_to_l1(std::max(0.0, th));
}

std::optional<double> critical_visibility(ThetaSource source, BoundKind bound)
{
    constexpr int kSteps = 1000;
    double prev = 0.0;
    if (fritz_margin(0.0, source, bound) > 0.0)
        return 0.0;
    for (int i = 1; i <= kSteps; ++i) {
        const double v = static_cast<double>(i) / kSteps;
        if (fritz_margin(v, source, bound) > 0.0) {
            double lo = prev;
            double hi = v;
            while (hi - lo > 1e-6) {
                const double mid = 0.5 * (lo + hi);
                if (fritz_margin(mid, source, bound) > 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            return hi;
        }
        prev = v;
    }
    return std::nullopt;
}

FritzScanRow fritz_scan_row(double v)
{
    FritzScanRow row;
    row.v = v;
    const Distribution d = fritz_distribution(v);
    const Behavior b = behavior_from_distribution(d, {"x", "y"}, {"a", "b"});
    row.chsh = chsh(b);
    row.lower_mi = chsh_mi_lower(row.chsh);
    row.theta_formula = fritz_theta_paper_formula(v);
    row.theta_distribution = theta(d, "x", "y", {"r0", "r1"}).value;
    row.verdict = to_string(decide(row.lower_mi, row.theta_distribution));
    return row;
}

Behavior ghz_mermin_behavior()
{
    CVector ghz = CVector::Zero(8);
    ghz(0) = 1.0 / std::numbers::sqrt2;
    ghz(7) = kI / std::numbers::sqrt2;
    std::vector<QuantumSource> sources{{DensityMatrix::pure(ghz), {2, 2, 2}, {0, 1, 2}}};
    const std::vector<Povm> settings{Povm::observable(pauli::X()), Povm::observable(pauli::Y())};
    return born_behavior(sources, {{"a", "x", settings}, {"b", "y", settings}, {"c", "z", settings}});
}

Behavior bilocality_quantum_behavior()
{
    const DensityMatrix phi = DensityMatrix::pure(phi_plus());
    std::vector<QuantumSource> sources{{phi, {2, 2}, {0, 1}}, {phi, {2, 2}, {1, 2}}};
    const double s = 1.0 / std::numbers::sqrt2;
    auto bell = [&](int i0, int i1, int i2, int i3) {
        CVector v(4);
        v << i0 * s, i1 * s, i2 * s, i3 * s;
        return v;
    };
    // index b0 * 2 + b1: b0 = ZZ parity, b1 = XX parity
    const Povm bsm = Povm::basis({bell(1, 0, 0, 1), bell(1, 0, 0, -1), bell(0, 1, 1, 0), bell(0, 1, -1, 0)});
    const std::vector<Povm> ends{Povm::observable((pauli::Z() + pauli::X()) * s),
                                 Povm::observable((pauli::Z() - pauli::X()) * s)};
    return born_behavior(sources, {{"a1", "x1", ends}, {"a2", std::nullopt, {bsm}}, {"a3", "x3", ends}});
}

} // namespace mdnet
