#pragma once

#include "coxdr/rational.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace coxdr {

/// normal . x >= offset
struct Halfspace {
    RationalVector normal;
    Rational offset;
};

/// Conjunction of inequalities (normal . x >= offset) and equalities
/// (normal . x == offset) over a fixed ambient dimension.
class HalfspaceSystem {
public:
    explicit HalfspaceSystem(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    const std::vector<Halfspace>& inequalities() const { return ineq_; }
    const std::vector<Halfspace>& equalities() const { return eq_; }

    void add_ge(RationalVector normal, Rational offset) { ineq_.push_back(checked(std::move(normal), std::move(offset))); }
    void add_le(RationalVector normal, Rational offset) {
        for (auto& x : normal)
            x = -x;
        add_ge(std::move(normal), -offset);
    }
    void add_eq(RationalVector normal, Rational offset) { eq_.push_back(checked(std::move(normal), std::move(offset))); }

    bool satisfied_by(const RationalVector& x) const {
        if (x.size() != dim_)
            return false;
        for (const auto& h : ineq_)
            if (dot(h.normal, x) < h.offset)
                return false;
        for (const auto& h : eq_)
            if (dot(h.normal, x) != h.offset)
                return false;
        return true;
    }

private:
    Halfspace checked(RationalVector normal, Rational offset) const {
        if (normal.size() != dim_)
            throw std::invalid_argument("HalfspaceSystem: constraint dimension " + std::to_string(normal.size()) +
                                        " does not match ambient dimension " + std::to_string(dim_));
        if (is_zero(normal))
            throw std::invalid_argument("HalfspaceSystem: zero normal");
        return {std::move(normal), std::move(offset)};
    }

    std::size_t dim_;
    std::vector<Halfspace> ineq_;
    std::vector<Halfspace> eq_;
};

namespace detail {

// Chvatal-style dictionary: basic[r] = constant[r] + sum_c coef[r][c] * nonbasic[c].
// Variable ids: [0,d) free unknowns, [d, d+m) constraint slacks, d+m the phase-one
// auxiliary. Every entering/leaving choice uses the smallest id (Bland).
class Dictionary {
public:
    explicit Dictionary(const HalfspaceSystem& sys) : d_(sys.dim()) {
        const auto& ineq = sys.inequalities();
        const auto& eq = sys.equalities();
        m_ = ineq.size() + eq.size();
        aux_ = d_ + m_;
        eq_slack_.assign(aux_ + 1, false);
        for (std::size_t j = 0; j < d_; ++j)
            nonbasic_.push_back(j);
        alive_.assign(d_, true);
        auto add_row = [&](const Halfspace& h, bool equality) {
            Row row;
            row.basic = d_ + rows_.size();
            row.constant = -h.offset;
            row.coef = h.normal;
            eq_slack_[row.basic] = equality;
            rows_.push_back(std::move(row));
        };
        for (const auto& h : ineq)
            add_row(h, false);
        for (const auto& h : eq)
            add_row(h, true);
    }

    std::optional<RationalVector> solve() {
        eliminate_free();
        if (!eliminate_equalities())
            return std::nullopt;
        if (!phase_one())
            return std::nullopt;
        return read_solution();
    }

private:
    struct Row {
        std::size_t basic = 0;
        Rational constant;
        RationalVector coef;
        bool definition = false; // basic is a free unknown; unconstrained
        bool dropped = false;
    };

    void pivot(std::size_t r, std::size_t c) {
        Row& pr = rows_[r];
        Rational inv = 1 / pr.coef[c];
        pr.constant = -pr.constant * inv;
        for (std::size_t k = 0; k < pr.coef.size(); ++k) {
            if (k == c)
                pr.coef[k] = inv;
            else if (sgn(pr.coef[k]) != 0)
                pr.coef[k] = -pr.coef[k] * inv;
        }
        std::swap(pr.basic, nonbasic_[c]);
        auto substitute = [&](Rational& constant, RationalVector& coef) {
            if (sgn(coef[c]) == 0)
                return;
            Rational t = coef[c];
            constant += t * pr.constant;
            for (std::size_t k = 0; k < coef.size(); ++k) {
                if (k == c)
                    coef[k] = t * pr.coef[k];
                else if (sgn(pr.coef[k]) != 0)
                    coef[k] += t * pr.coef[k];
            }
        };
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (i != r && !rows_[i].dropped)
                substitute(rows_[i].constant, rows_[i].coef);
        if (has_objective_)
            substitute(obj_constant_, obj_);
    }

    // Pivot every free unknown into the basis, preferring equality rows.
    void eliminate_free() {
        for (std::size_t c = 0; c < d_; ++c) {
            std::optional<std::size_t> pick;
            for (int pass = 0; pass < 2 && !pick; ++pass) {
                for (std::size_t r = 0; r < rows_.size(); ++r) {
                    const Row& row = rows_[r];
                    if (row.dropped || row.definition || eq_slack_[row.basic] != (pass == 0))
                        continue;
                    if (sgn(row.coef[c]) != 0) {
                        pick = r;
                        break;
                    }
                }
            }
            if (!pick) {
                alive_[c] = false; // unconstrained direction; fixed at zero
                continue;
            }
            pivot(*pick, c);
            rows_[*pick].definition = true;
        }
        for (std::size_t c = 0; c < nonbasic_.size(); ++c)
            if (eq_slack_[nonbasic_[c]])
                alive_[c] = false;
    }

    bool eliminate_equalities() {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            Row& row = rows_[r];
            if (row.dropped || row.definition || !eq_slack_[row.basic])
                continue;
            std::optional<std::size_t> col;
            for (std::size_t c = 0; c < nonbasic_.size(); ++c)
                if (alive_[c] && sgn(row.coef[c]) != 0) {
                    col = c;
                    break;
                }
            if (!col) {
                if (sgn(row.constant) != 0)
                    return false;
                row.dropped = true;
                continue;
            }
            pivot(r, *col);
            alive_[*col] = false; // the equality slack left the basis at value zero
        }
        return true;
    }

    bool constrained(const Row& row) const { return !row.dropped && !row.definition; }

    bool phase_one() {
        bool feasible = true;
        for (const auto& row : rows_)
            if (constrained(row) && sgn(row.constant) < 0)
                feasible = false;
        if (feasible)
            return true;
        nonbasic_.push_back(aux_);
        alive_.push_back(true);
        for (auto& row : rows_)
            row.coef.push_back(constrained(row) ? Rational(1) : Rational(0));
        const std::size_t aux_col = nonbasic_.size() - 1;
        obj_.assign(nonbasic_.size(), Rational(0));
        obj_[aux_col] = -1;
        obj_constant_ = 0;
        has_objective_ = true;
        std::optional<std::size_t> worst;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (!constrained(rows_[r]))
                continue;
            if (!worst || rows_[r].constant < rows_[*worst].constant ||
                (rows_[r].constant == rows_[*worst].constant && rows_[r].basic < rows_[*worst].basic))
                worst = r;
        }
        pivot(*worst, aux_col);
        while (true) {
            std::optional<std::size_t> enter;
            for (std::size_t c = 0; c < nonbasic_.size(); ++c)
                if (alive_[c] && sgn(obj_[c]) > 0 && (!enter || nonbasic_[c] < nonbasic_[*enter]))
                    enter = c;
            if (!enter)
                break;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                const Row& row = rows_[r];
                if (!constrained(row) || sgn(row.coef[*enter]) >= 0)
                    continue;
                Rational ratio = row.constant / -row.coef[*enter];
                if (!leave || ratio < best || (ratio == best && row.basic < rows_[*leave].basic)) {
                    leave = r;
                    best = ratio;
                }
            }
            if (!leave)
                throw std::logic_error("lp_feasible: phase-one objective unbounded");
            pivot(*leave, *enter);
        }
        return sgn(obj_constant_) >= 0;
    }

    RationalVector read_solution() const {
        RationalVector x = zeros(d_);
        for (const auto& row : rows_)
            if (!row.dropped && row.basic < d_)
                x[row.basic] = row.constant;
        return x;
    }

    std::size_t d_;
    std::size_t m_ = 0;
    std::size_t aux_ = 0;
    std::vector<Row> rows_;
    std::vector<std::size_t> nonbasic_;
    std::vector<bool> alive_;
    std::vector<bool> eq_slack_;
    RationalVector obj_;
    Rational obj_constant_;
    bool has_objective_ = false;
};

} // namespace detail

/// Exact feasibility test. Returns a point satisfying every constraint, or
/// nullopt if the system is infeasible. Deterministic for a fixed input.
inline std::optional<RationalVector> lp_feasible(const HalfspaceSystem& system) {
    detail::Dictionary dict(system);
    auto x = dict.solve();
    if (x && !system.satisfied_by(*x))
        throw std::logic_error("lp_feasible: witness fails verification");
    return x;
}

} // namespace coxdr
