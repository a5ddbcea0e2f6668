#include "mdnet/lp.hpp"

#include <limits>
#include <optional>

#include "mdnet/error.hpp"

namespace mdnet {

namespace {

enum class Kind { Coord, Ineq, Eq, Aux };

// Dictionary: basic_r = constant_r + sum_c coef[r][c] * nonbasic_c.
class Dictionary {
public:
    Dictionary(std::size_t dim, std::span<const LinForm> ineqs, std::span<const LinForm> eqs,
               const LinForm& objective)
        : dim_(dim), n_ineq_(ineqs.size()), n_eq_(eqs.size())
    {
        cols_.resize(dim);
        for (std::size_t j = 0; j < dim; ++j)
            cols_[j] = j;
        col_fixed_.assign(dim, false);
        auto add_row = [&](const LinForm& f, std::size_t id) {
            if (f.dim() != dim)
                throw ArgumentError("constraint dimension does not match the LP");
            Row row;
            row.basic = id;
            row.constant = f.constant;
            row.coef = f.coeffs;
            rows_.push_back(std::move(row));
        };
        for (std::size_t i = 0; i < ineqs.size(); ++i)
            add_row(ineqs[i], dim + i);
        for (std::size_t k = 0; k < eqs.size(); ++k)
            add_row(eqs[k], dim + n_ineq_ + k);
        if (objective.dim() != dim)
            throw ArgumentError("objective dimension does not match the LP");
        obj_.constant = objective.constant;
        obj_.coef = objective.coeffs;
    }

    LpResult solve()
    {
        LpResult res;
        if (!pivot_out_equalities()) {
            res.status = LpStatus::Infeasible;
            return finish(res);
        }
        if (auto unbounded = pivot_in_free_coordinates()) {
            res.status = LpStatus::Unbounded;
            res.point.assign(dim_, Rational(0));
            res.ray = std::move(*unbounded);
            // the free direction leaves every slack unchanged; any feasible
            // point works as the base, so run phase 1 to find one
            if (!phase_one())
                res.status = LpStatus::Infeasible;
            else
                res.point = current_point();
            return finish(res);
        }
        if (!phase_one()) {
            res.status = LpStatus::Infeasible;
            return finish(res);
        }
        return finish(phase_two());
    }

private:
    struct Row {
        std::size_t basic = 0;
        Rational constant;
        std::vector<Rational> coef;
        bool dropped = false;
    };

    Kind kind(std::size_t id) const
    {
        if (id < dim_)
            return Kind::Coord;
        if (id < dim_ + n_ineq_)
            return Kind::Ineq;
        if (id < dim_ + n_ineq_ + n_eq_)
            return Kind::Eq;
        return Kind::Aux;
    }

    bool enterable(std::size_t c) const
    {
        if (col_fixed_[c])
            return false;
        const Kind k = kind(cols_[c]);
        return k == Kind::Ineq || k == Kind::Aux;
    }

    bool ratio_row(const Row& r) const
    {
        if (r.dropped)
            return false;
        const Kind k = kind(r.basic);
        return k == Kind::Ineq || k == Kind::Aux;
    }

    void pivot(std::size_t r, std::size_t c)
    {
        ++pivots_;
        Row& pr = rows_[r];
        const Rational a = pr.coef[c];
        const Rational inv = 1 / a;
        // solve the pivot row for the entering variable
        pr.constant = -pr.constant * inv;
        for (std::size_t j = 0; j < pr.coef.size(); ++j) {
            if (j == c)
                pr.coef[j] = inv;
            else if (pr.coef[j] != 0)
                pr.coef[j] = -pr.coef[j] * inv;
        }
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j < pr.coef.size(); ++j)
            if (j != c && pr.coef[j] != 0)
                nz.push_back(j);

        Rational t;
        auto substitute = [&](Row& row) {
            if (row.coef[c] == 0)
                return;
            const Rational f = row.coef[c];
            row.constant += f * pr.constant;
            for (std::size_t j : nz) {
                t = f * pr.coef[j];
                row.coef[j] += t;
            }
            row.coef[c] = f * inv;
        };
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (i != r && !rows_[i].dropped)
                substitute(rows_[i]);
        substitute(obj_);
        if (phase1_active_)
            substitute(obj1_);
        std::swap(pr.basic, cols_[c]);
    }

    bool pivot_out_equalities()
    {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (kind(rows_[r].basic) != Kind::Eq)
                continue;
            std::optional<std::size_t> col;
            for (std::size_t c = 0; c < cols_.size() && !col; ++c)
                if (kind(cols_[c]) == Kind::Coord && rows_[r].coef[c] != 0)
                    col = c;
            if (col) {
                pivot(r, *col);
                col_fixed_[*col] = true; // the equality slack now sits here at 0
                continue;
            }
            // dependent equality: its value is the constant
            if (rows_[r].constant != 0)
                return false;
            rows_[r].dropped = true;
        }
        return true;
    }

    // Returns an unbounded ray if a free coordinate direction improves the objective.
    std::optional<std::vector<Rational>> pivot_in_free_coordinates()
    {
        std::optional<std::vector<Rational>> ray;
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            if (kind(cols_[c]) != Kind::Coord)
                continue;
            std::optional<std::size_t> row;
            for (std::size_t r = 0; r < rows_.size() && !row; ++r)
                if (!rows_[r].dropped && kind(rows_[r].basic) == Kind::Ineq && rows_[r].coef[c] != 0)
                    row = r;
            if (row) {
                pivot(*row, c);
                continue;
            }
            col_fixed_[c] = true;
            if (obj_.coef[c] != 0 && !ray) {
                const int sign = obj_.coef[c] > 0 ? 1 : -1;
                ray = direction(c, sign);
            }
        }
        return ray;
    }

    std::vector<Rational> direction(std::size_t c, int sign) const
    {
        std::vector<Rational> d(dim_, Rational(0));
        if (kind(cols_[c]) == Kind::Coord)
            d[cols_[c]] = sign;
        for (const auto& row : rows_)
            if (!row.dropped && kind(row.basic) == Kind::Coord)
                d[row.basic] = row.coef[c] * sign;
        return d;
    }

    std::vector<Rational> current_point() const
    {
        std::vector<Rational> x(dim_, Rational(0));
        for (const auto& row : rows_)
            if (!row.dropped && kind(row.basic) == Kind::Coord)
                x[row.basic] = row.constant;
        return x;
    }

    // Bland's rule; returns the entering column or nullopt at optimality.
    std::optional<std::size_t> choose_entering(const Row& objective) const
    {
        std::optional<std::size_t> best;
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            if (!enterable(c) || objective.coef[c] <= 0)
                continue;
            if (!best || cols_[c] < cols_[*best])
                best = c;
        }
        return best;
    }

    std::optional<std::size_t> choose_leaving(std::size_t c) const
    {
        std::optional<std::size_t> best;
        Rational best_ratio;
        Rational ratio;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Row& row = rows_[r];
            if (!ratio_row(row) || row.coef[c] >= 0)
                continue;
            ratio = row.constant / -row.coef[c];
            if (!best || ratio < best_ratio || (ratio == best_ratio && row.basic < rows_[*best].basic)) {
                best = r;
                best_ratio = ratio;
            }
        }
        return best;
    }

    bool phase_one()
    {
        std::optional<std::size_t> most_negative;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Row& row = rows_[r];
            if (!ratio_row(row) || row.constant >= 0)
                continue;
            if (!most_negative || row.constant < rows_[*most_negative].constant)
                most_negative = r;
        }
        if (!most_negative)
            return true;

        const std::size_t aux_id = dim_ + n_ineq_ + n_eq_;
        const std::size_t ac = cols_.size();
        cols_.push_back(aux_id);
        col_fixed_.push_back(false);
        for (auto& row : rows_)
            row.coef.push_back(Rational(ratio_row(row) ? 1 : 0));
        obj_.coef.push_back(Rational(0));
        obj1_.constant = 0;
        obj1_.coef.assign(cols_.size(), Rational(0));
        obj1_.coef[ac] = -1;
        phase1_active_ = true;

        pivot(*most_negative, ac);
        while (auto c = choose_entering(obj1_)) {
            auto r = choose_leaving(*c);
            if (!r)
                throw Error("phase one cannot be unbounded");
            pivot(*r, *c);
        }
        const bool feasible = obj1_.constant == 0;
        phase1_active_ = false;
        if (!feasible)
            return false;

        // drive the auxiliary variable out of the basis if it stayed there at 0
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (rows_[r].dropped || rows_[r].basic != aux_id)
                continue;
            std::optional<std::size_t> col;
            for (std::size_t c = 0; c < cols_.size() && !col; ++c)
                if (enterable(c) && cols_[c] != aux_id && rows_[r].coef[c] != 0)
                    col = c;
            if (col)
                pivot(r, *col);
            else
                rows_[r].dropped = true;
        }
        for (std::size_t c = 0; c < cols_.size(); ++c)
            if (cols_[c] == aux_id)
                col_fixed_[c] = true;
        return true;
    }

    LpResult phase_two()
    {
        LpResult res;
        while (auto c = choose_entering(obj_)) {
            auto r = choose_leaving(*c);
            if (!r) {
                res.status = LpStatus::Unbounded;
                res.point = current_point();
                res.ray = direction(*c, 1);
                return res;
            }
            pivot(*r, *c);
        }
        res.status = LpStatus::Optimal;
        res.value = obj_.constant;
        res.point = current_point();
        res.ineq_multipliers.assign(n_ineq_, Rational(0));
        res.eq_multipliers.assign(n_eq_, Rational(0));
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            const std::size_t id = cols_[c];
            if (kind(id) == Kind::Ineq)
                res.ineq_multipliers[id - dim_] = -obj_.coef[c];
            else if (kind(id) == Kind::Eq)
                res.eq_multipliers[id - dim_ - n_ineq_] = -obj_.coef[c];
        }
        return res;
    }

    LpResult finish(LpResult res) const
    {
        res.pivots = pivots_;
        return res;
    }

    std::size_t dim_;
    std::size_t n_ineq_;
    std::size_t n_eq_;
    std::vector<Row> rows_;
    std::vector<std::size_t> cols_;
    std::vector<bool> col_fixed_;
    Row obj_;
    Row obj1_;
    bool phase1_active_ = false;
    std::size_t pivots_ = 0;
};

} // namespace

LpResult lp_maximize(std::size_t dim, std::span<const LinForm> ineqs, std::span<const LinForm> eqs,
                     const LinForm& objective)
{
    Dictionary d(dim, ineqs, eqs, objective);
    return d.solve();
}

bool certificate_holds(std::span<const LinForm> ineqs, std::span<const LinForm> eqs, const LinForm& objective,
                       const LpResult& result)
{
    if (result.status != LpStatus::Optimal)
        return false;
    if (result.ineq_multipliers.size() != ineqs.size() || result.eq_multipliers.size() != eqs.size())
        return false;
    LinForm rhs(objective.dim());
    rhs.constant = result.value;
    for (std::size_t i = 0; i < ineqs.size(); ++i) {
        if (result.ineq_multipliers[i] < 0)
            return false;
        if (result.ineq_multipliers[i] != 0)
            rhs -= ineqs[i] * result.ineq_multipliers[i];
    }
    for (std::size_t k = 0; k < eqs.size(); ++k)
        if (result.eq_multipliers[k] != 0)
            rhs -= eqs[k] * result.eq_multipliers[k];
    return rhs == objective;
}

} // namespace mdnet
