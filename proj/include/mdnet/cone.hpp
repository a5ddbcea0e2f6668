#pragma once

// Linear forms over entropy coordinates and the polyhedral systems built
// from them. Coordinates are the nonempty subsets of an ordered variable
// list (bitmask indexed, coordinate = mask - 1) followed by optional named
// auxiliary coordinates.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mdnet/probtab.hpp"
#include "mdnet/rational.hpp"

namespace mdnet {

class EntropySpace {
public:
    static constexpr std::size_t kMaxVariables = 12;

    EntropySpace() = default;
    explicit EntropySpace(VarSet variables, std::vector<std::string> auxiliary = {});

    const VarSet& variables() const { return vars_; }
    const std::vector<std::string>& auxiliary() const { return aux_; }
    std::size_t num_variables() const { return vars_.size(); }
    std::size_t num_subset_coordinates() const { return (std::size_t{1} << vars_.size()) - 1; }
    std::size_t dim() const { return num_subset_coordinates() + aux_.size(); }

    std::uint64_t mask_of(const VarSet& names) const;
    std::size_t coordinate(std::uint64_t mask) const;
    std::size_t coordinate(const VarSet& names) const { return coordinate(mask_of(names)); }
    std::size_t aux_coordinate(const std::string& name) const;
    bool is_aux(std::size_t coord) const { return coord >= num_subset_coordinates(); }
    std::uint64_t mask_at(std::size_t coord) const { return static_cast<std::uint64_t>(coord) + 1; }

    /// Serialization key: comma-joined sorted variable names, or the aux name.
    std::string key(std::size_t coord) const;
    /// Inverse of key(); accepts names in any order. Throws NameError.
    std::size_t coordinate_from_key(const std::string& key) const;

    bool operator==(const EntropySpace&) const = default;

private:
    VarSet vars_;
    std::vector<std::string> aux_;
};

/// sum_i coeffs[i] * x_i + constant.
struct LinForm {
    std::vector<Rational> coeffs;
    Rational constant;

    LinForm() = default;
    explicit LinForm(std::size_t dim) : coeffs(dim) {}

    std::size_t dim() const { return coeffs.size(); }
    bool is_zero() const;
    bool is_constant() const;

    LinForm& add_term(std::size_t coord, const Rational& c);
    LinForm& operator+=(const LinForm& other);
    LinForm& operator-=(const LinForm& other);
    LinForm& operator*=(const Rational& s);
    friend LinForm operator+(LinForm a, const LinForm& b) { return a += b; }
    friend LinForm operator-(LinForm a, const LinForm& b) { return a -= b; }
    friend LinForm operator*(LinForm a, const Rational& s) { return a *= s; }
    LinForm operator-() const;

    Rational evaluate(const std::vector<Rational>& point) const;
    double evaluate(const std::vector<double>& point) const;

    bool operator==(const LinForm&) const = default;
};

/// Scales to integer coefficients (constant included) with content 1. The
/// scale factor is positive, so the direction of an inequality is kept. With
/// `fix_sign` the leading nonzero entry is made positive as well.
LinForm canonical(LinForm f, bool fix_sign);

/// Strict weak order used to sort canonical forms deterministically.
bool linform_less(const LinForm& a, const LinForm& b);

/// Entropy expressions as linear forms: H(S), I(A:B|C), ...
struct EntropyExpr {
    static LinForm H(const EntropySpace& s, const VarSet& set);
    static LinForm H(const EntropySpace& s, std::uint64_t mask);
    static LinForm cond_H(const EntropySpace& s, const VarSet& a, const VarSet& given);
    static LinForm I(const EntropySpace& s, const VarSet& a, const VarSet& b);
    static LinForm cmi(const EntropySpace& s, const VarSet& a, const VarSet& b, const VarSet& given);
    static LinForm cmi(const EntropySpace& s, std::uint64_t a, std::uint64_t b, std::uint64_t given);
    static LinForm I3(const EntropySpace& s, const VarSet& a, const VarSet& b, const VarSet& c);
    static LinForm aux(const EntropySpace& s, const std::string& name);
};

/// {x : ineqs(x) >= 0, eqs(x) = 0}. Forms are kept canonical and duplicate free.
class Cone {
public:
    Cone() = default;
    explicit Cone(EntropySpace space) : space_(std::move(space)) {}

    const EntropySpace& space() const { return space_; }
    const std::vector<LinForm>& inequalities() const { return ineqs_; }
    const std::vector<LinForm>& equalities() const { return eqs_; }

    /// Returns false when the canonical form was already present or trivial.
    bool add_inequality(const LinForm& f);
    bool add_equality(const LinForm& f);

    void set_inequalities(std::vector<LinForm> forms);
    void set_equalities(std::vector<LinForm> forms);

    /// Largest violation over all constraints at a float point (<= 0 means satisfied).
    double max_violation(const std::vector<double>& point) const;

private:
    EntropySpace space_;
    std::vector<LinForm> ineqs_;
    std::vector<LinForm> eqs_;
};

/// Entropy vector of `dist` laid out in the coordinates of `space` (whose
/// variables must all be present in `dist`). Aux coordinates are left at 0.
std::vector<double> entropy_point(const EntropySpace& space, const Distribution& dist);

} // namespace mdnet
