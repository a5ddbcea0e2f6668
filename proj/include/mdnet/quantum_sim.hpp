#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mdnet/bell_functionals.hpp"
#include "mdnet/probtab.hpp"

namespace mdnet {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxHilbertDim = 1024;

namespace pauli {
CMatrix I();
CMatrix X();
CMatrix Y();
CMatrix Z();
} // namespace pauli

/// Hermitian, unit trace, positive semidefinite (min eigenvalue >= -1e-9).
class DensityMatrix {
public:
    explicit DensityMatrix(CMatrix rho);

    static DensityMatrix pure(const CVector& psi);
    static DensityMatrix maximally_mixed(int dim);

    int dim() const { return static_cast<int>(rho_.rows()); }
    const CMatrix& matrix() const { return rho_; }

private:
    CMatrix rho_;
};

/// Elements are PSD and sum to the identity (1e-10).
class Povm {
public:
    explicit Povm(std::vector<CMatrix> elements);

    /// Two-outcome projective measurement of a +-1 valued observable; outcome
    /// 0 is the +1 eigenspace.
    static Povm observable(const CMatrix& o);
    /// Projectors onto the given orthonormal vectors.
    static Povm basis(const std::vector<CVector>& vectors);

    std::size_t size() const { return elements_.size(); }
    int dim() const { return static_cast<int>(elements_.front().rows()); }
    const CMatrix& operator[](std::size_t i) const { return elements_[i]; }
    const std::vector<CMatrix>& elements() const { return elements_; }

private:
    std::vector<CMatrix> elements_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);
CMatrix kron(const std::vector<CMatrix>& ops);
DensityMatrix kron(const std::vector<DensityMatrix>& states);

/// Hermitian eigenvalues in increasing order.
Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m);

CVector phi_plus();
/// v |Phi+><Phi+| + (1 - v) 1/4.
DensityMatrix isotropic_state(double v);

/// A state whose subsystems are handed to parties: subsystem k has dimension
/// dims[k] and goes to party recipients[k].
struct QuantumSource {
    DensityMatrix state;
    std::vector<int> dims;
    std::vector<std::size_t> recipients;
};

/// A party measures everything it receives, ordered by (source, subsystem).
/// Its outcome index is split into the listed variables (mixed radix, first
/// most significant).
struct QuantumParty {
    std::vector<VariableSpec> outcomes;
    Povm povm;
};

Distribution born_joint(const std::vector<QuantumSource>& sources, const std::vector<QuantumParty>& parties);

/// Parties with several settings become inputs of the behavior.
struct QuantumSetting {
    std::string output;
    std::optional<std::string> input; // required when there is more than one setting
    std::vector<Povm> settings;
};

Behavior born_behavior(const std::vector<QuantumSource>& sources, const std::vector<QuantumSetting>& parties);

/// Joint over (a, x, b, y, r0, r1) with all three sources at visibility v.
Distribution fritz_distribution(double v);
/// p(a, b | x, y) of the Fritz distribution.
Behavior fritz_conditional(double v);
double fritz_theta_paper_formula(double v);
/// Theta of the (x, y, (r0, r1)) marginal of fritz_distribution(v).
double fritz_theta_distribution(double v);

enum class ThetaSource { PaperFormula, Distribution, Zero };
enum class BoundKind { Mi, L1 };

ThetaSource parse_theta_source(const std::string& s);
BoundKind parse_bound_kind(const std::string& s);

/// lower(v) - upper(v) for the chosen comparison, with CHSH = 2 sqrt(2) v.
double fritz_margin(double v, ThetaSource source, BoundKind bound);

/// Smallest visibility with a positive margin: 1e-3 grid scan then bisection
/// to 1e-6. Empty when no grid point is positive.
std::optional<double> critical_visibility(ThetaSource source, BoundKind bound);

struct FritzScanRow {
    double v = 0.0;
    double chsh = 0.0;
    double lower_mi = 0.0;
    double theta_formula = 0.0;
    double theta_distribution = 0.0;
    std::string verdict;
};

FritzScanRow fritz_scan_row(double v);

/// (|000> + i|111>)/sqrt(2), settings 0 -> sigma_x, 1 -> sigma_y; Mermin value 4.
Behavior ghz_mermin_behavior();

/// Two Phi+ sources, Bell-state measurement in the middle (split-bit: most
/// significant bit is the ZZ parity, the other the XX parity), endpoints
/// measuring (Z +- X)/sqrt(2). Outputs (a1, a2, a3), inputs (x1, x3).
Behavior bilocality_quantum_behavior();

} // namespace mdnet
