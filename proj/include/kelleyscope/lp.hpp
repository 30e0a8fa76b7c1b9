#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kelleyscope/errors.hpp"
#include "kelleyscope/rational.hpp"

namespace kelleyscope {

// Exact linear programming over rationals. A dense two-phase primal simplex
// with Bland's rule (smallest-index entering column; smallest-index basic
// variable among minimum-ratio rows), so runs are deterministic and cycling
// is impossible. No floating point anywhere.
//
// Dual convention. Internally every instance is canonicalized to
//     optimize c~.x~ + constant,   A~ x~ {<=,=,>=} b~,   x~ >= 0,
// where canonical rows are the user rows in order followed by one "x_j <= u"
// row per finite upper bound (ascending j), finite lower bounds are shifted
// away and free variables are split. LpSolution::dual has one entry per
// canonical row and satisfies, exactly:
//
//   maximize:  y_i >= 0 on <= rows, y_i <= 0 on >= rows, free on = rows;
//              A~^T y >= c~ componentwise;   y.b~ + constant == value.
//   minimize:  y_i <= 0 on <= rows, y_i >= 0 on >= rows, free on = rows;
//              A~^T y <= c~ componentwise;   y.b~ + constant == value.
//
// verify() rebuilds the canonicalization independently and checks primal
// feasibility, dual feasibility and exact objective equality; together these
// certify optimality by weak duality, without trusting the pivot path.

enum class Sense { le, eq, ge };
enum class Objective { maximize, minimize };
enum class LpStatus { optimal, infeasible, unbounded };

struct Bounds {
    std::optional<Rational> lower = Rational(0); // nullopt = -infinity
    std::optional<Rational> upper;               // nullopt = +infinity
};

struct LpInstance {
    Objective objective_sense = Objective::maximize;
    std::vector<Rational> objective;
    std::vector<std::vector<Rational>> rows;
    std::vector<Sense> senses;
    std::vector<Rational> rhs;
    std::vector<Bounds> bounds; // empty means all-default [0, +inf)

    std::size_t num_vars() const { return objective.size(); }
    std::size_t num_rows() const { return rows.size(); }

    void validate() const {
        if (objective.empty()) throw structural_error("lp: no variables");
        if (rows.size() != senses.size() || rows.size() != rhs.size())
            throw structural_error("lp: rows/senses/rhs sizes disagree");
        for (const auto& r : rows)
            if (r.size() != objective.size())
                throw structural_error("lp: row width does not match variable count");
        if (!bounds.empty() && bounds.size() != objective.size())
            throw structural_error("lp: bounds size does not match variable count");
        if (!bounds.empty())
            for (const auto& b : bounds)
                if (b.lower && b.upper && *b.upper < *b.lower)
                    throw structural_error("lp: empty bound interval");
    }

    Bounds bound(std::size_t j) const { return bounds.empty() ? Bounds{} : bounds[j]; }
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Rational value;
    std::vector<Rational> primal; // original variables
    std::vector<Rational> dual;   // per canonical row (user rows, then bound rows)
};

namespace detail {

struct CanonVar {
    std::size_t pos;                 // canonical column of the (shifted) variable
    std::optional<std::size_t> neg;  // second column when split (free variable)
    Rational shift;                  // x_orig = shift + sign*(x[pos] - x[neg])
    bool negated = false;            // x_orig = shift - x[pos] (upper bound only)
};

struct CanonLp {
    std::vector<Rational> c; // original objective over canonical columns
    std::vector<std::vector<Rational>> A;
    std::vector<Sense> senses;
    std::vector<Rational> b;
    Rational constant;
    std::vector<CanonVar> vars;
    std::size_t user_rows = 0;
    bool trivially_infeasible = false;
};

inline CanonLp canonicalize(const LpInstance& lp) {
    lp.validate();
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();
    CanonLp canon;
    canon.user_rows = m;
    canon.constant = 0;

    std::vector<std::pair<std::size_t, Rational>> upper_rows; // (var, bound after shift)
    std::size_t col = 0;
    for (std::size_t j = 0; j < n; ++j) {
        Bounds bj = lp.bound(j);
        CanonVar v{col, std::nullopt, Rational(0), false};
        if (bj.lower && bj.upper && *bj.upper < *bj.lower) canon.trivially_infeasible = true;
        if (bj.lower) {
            v.shift = *bj.lower;
            if (bj.upper) upper_rows.emplace_back(j, *bj.upper - *bj.lower);
            ++col;
        } else if (bj.upper) {
            v.shift = *bj.upper;
            v.negated = true;
            ++col;
        } else {
            v.neg = col + 1;
            col += 2;
        }
        canon.vars.push_back(std::move(v));
    }
    const std::size_t nc = col;

    canon.c.assign(nc, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        const CanonVar& v = canon.vars[j];
        Rational sign = v.negated ? Rational(-1) : Rational(1);
        canon.c[v.pos] = lp.objective[j] * sign;
        if (v.neg) canon.c[*v.neg] = -lp.objective[j];
        canon.constant += lp.objective[j] * v.shift;
    }

    canon.A.assign(m + upper_rows.size(), std::vector<Rational>(nc, Rational(0)));
    canon.senses.reserve(m + upper_rows.size());
    canon.b.reserve(m + upper_rows.size());
    for (std::size_t i = 0; i < m; ++i) {
        Rational bi = lp.rhs[i];
        for (std::size_t j = 0; j < n; ++j) {
            const Rational& a = lp.rows[i][j];
            if (a == 0) continue;
            const CanonVar& v = canon.vars[j];
            canon.A[i][v.pos] = v.negated ? -a : a;
            if (v.neg) canon.A[i][*v.neg] = -a;
            bi -= a * v.shift;
        }
        canon.senses.push_back(lp.senses[i]);
        canon.b.push_back(std::move(bi));
    }
    for (std::size_t k = 0; k < upper_rows.size(); ++k) {
        auto& [j, ub] = upper_rows[k];
        canon.A[m + k][canon.vars[j].pos] = 1;
        canon.senses.push_back(Sense::le);
        canon.b.push_back(ub);
    }
    return canon;
}

// Simplex over the canonical system; always maximizes `cost`.
struct Tableau {
    std::size_t struct_cols = 0;
    std::vector<std::vector<Rational>> T; // rows x (cols + 1), last entry rhs
    std::vector<std::size_t> basis;       // per tableau row: basic column
    std::vector<std::size_t> row_id;      // per tableau row: canonical row index
    std::vector<bool> is_artificial;
    std::vector<std::size_t> ident_col;   // per canonical row: its slack/artificial column
    std::vector<bool> flipped;            // per canonical row: multiplied by -1
    std::vector<Rational> zrow;           // z_j - c_j
    Rational zval;

    std::size_t cols() const { return is_artificial.size(); }

    void init_costs(const std::vector<Rational>& cost) {
        zrow.assign(cols(), Rational(0));
        zval = 0;
        for (std::size_t j = 0; j < cols(); ++j) {
            Rational z(0);
            for (std::size_t i = 0; i < T.size(); ++i) {
                const Rational& cb = cost[basis[i]];
                if (cb != 0 && T[i][j] != 0) z += cb * T[i][j];
            }
            zrow[j] = z - cost[j];
        }
        for (std::size_t i = 0; i < T.size(); ++i) {
            const Rational& cb = cost[basis[i]];
            if (cb != 0) zval += cb * T[i].back();
        }
    }

    void pivot(std::size_t r, std::size_t j) {
        const std::size_t w = T[r].size();
        Rational p = T[r][j];
        for (std::size_t k = 0; k < w; ++k)
            if (T[r][k] != 0) T[r][k] /= p;
        for (std::size_t i = 0; i < T.size(); ++i) {
            if (i == r || T[i][j] == 0) continue;
            Rational f = T[i][j];
            for (std::size_t k = 0; k < w; ++k)
                if (T[r][k] != 0) T[i][k] -= f * T[r][k];
        }
        if (zrow[j] != 0) {
            Rational f = zrow[j];
            for (std::size_t k = 0; k < cols(); ++k)
                if (T[r][k] != 0) zrow[k] -= f * T[r][k];
            zval -= f * T[r].back();
        }
        basis[r] = j;
    }

    enum class Step { pivoted, optimal, unbounded };

    // One Bland step: smallest improving column in, smallest basic index
    // among minimum-ratio rows out.
    Step step(bool allow_artificial_entering) {
        std::size_t enter = cols();
        for (std::size_t j = 0; j < cols(); ++j) {
            if (!allow_artificial_entering && is_artificial[j]) continue;
            if (zrow[j] < 0) { enter = j; break; }
        }
        if (enter == cols()) return Step::optimal;
        std::size_t leave = T.size();
        Rational best_ratio;
        for (std::size_t i = 0; i < T.size(); ++i) {
            if (T[i][enter] <= 0) continue;
            Rational ratio = T[i].back() / T[i][enter];
            if (leave == T.size() || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == T.size()) return Step::unbounded;
        pivot(leave, enter);
        return Step::pivoted;
    }
};

inline LpSolution solve_canonical_max(const CanonLp& canon, const std::vector<Rational>& cmax) {
    const std::size_t m = canon.A.size();
    const std::size_t n = canon.c.size();

    Tableau tab;
    tab.struct_cols = n;
    tab.flipped.assign(m, false);
    tab.ident_col.assign(m, 0);

    // Column layout: structural, then one slack/surplus or artificial per row
    // (artificials additionally for flipped-le and eq/ge rows).
    std::size_t next_col = n;
    std::vector<std::size_t> slack_col(m, 0), art_col(m, SIZE_MAX);
    std::vector<Sense> sense(m);
    std::vector<Rational> b = canon.b;
    for (std::size_t i = 0; i < m; ++i) {
        sense[i] = canon.senses[i];
        if (b[i] < 0) {
            tab.flipped[i] = true;
            b[i] = -b[i];
            if (sense[i] == Sense::le) sense[i] = Sense::ge;
            else if (sense[i] == Sense::ge) sense[i] = Sense::le;
        }
        if (sense[i] != Sense::eq) slack_col[i] = next_col++;
    }
    for (std::size_t i = 0; i < m; ++i)
        if (sense[i] != Sense::le) art_col[i] = next_col++;
    const std::size_t total = next_col;

    tab.is_artificial.assign(total, false);
    for (std::size_t i = 0; i < m; ++i)
        if (art_col[i] != SIZE_MAX) tab.is_artificial[art_col[i]] = true;

    tab.T.assign(m, std::vector<Rational>(total + 1, Rational(0)));
    tab.basis.assign(m, 0);
    tab.row_id.resize(m);
    bool need_phase1 = false;
    for (std::size_t i = 0; i < m; ++i) {
        tab.row_id[i] = i;
        for (std::size_t j = 0; j < n; ++j)
            tab.T[i][j] = tab.flipped[i] ? -canon.A[i][j] : canon.A[i][j];
        tab.T[i].back() = b[i];
        if (sense[i] == Sense::le) {
            tab.T[i][slack_col[i]] = 1;
            tab.basis[i] = slack_col[i];
            tab.ident_col[i] = slack_col[i];
        } else {
            if (sense[i] == Sense::ge) tab.T[i][slack_col[i]] = -1;
            tab.T[i][art_col[i]] = 1;
            tab.basis[i] = art_col[i];
            tab.ident_col[i] = art_col[i];
            need_phase1 = true;
        }
    }

    LpSolution sol;

    if (need_phase1) {
        std::vector<Rational> phase1(total, Rational(0));
        for (std::size_t j = 0; j < total; ++j)
            if (tab.is_artificial[j]) phase1[j] = -1;
        tab.init_costs(phase1);
        while (tab.step(true) == Tableau::Step::pivoted) {} // bounded above by 0
        if (tab.zval != 0) {
            sol.status = LpStatus::infeasible;
            return sol;
        }
        // Drive leftover artificials out of the basis; a row that cannot be
        // pivoted is redundant and is removed.
        for (std::size_t i = 0; i < tab.T.size();) {
            if (!tab.is_artificial[tab.basis[i]]) { ++i; continue; }
            std::size_t piv = total;
            for (std::size_t j = 0; j < total; ++j)
                if (!tab.is_artificial[j] && tab.T[i][j] != 0) { piv = j; break; }
            if (piv < total) {
                tab.pivot(i, piv);
                ++i;
            } else {
                tab.T.erase(tab.T.begin() + i);
                tab.basis.erase(tab.basis.begin() + i);
                tab.row_id.erase(tab.row_id.begin() + i);
            }
        }
    }

    std::vector<Rational> cost(total, Rational(0));
    for (std::size_t j = 0; j < n; ++j) cost[j] = cmax[j];
    tab.init_costs(cost);
    for (;;) {
        Tableau::Step res = tab.step(false);
        if (res == Tableau::Step::optimal) break;
        if (res == Tableau::Step::unbounded) {
            sol.status = LpStatus::unbounded;
            return sol;
        }
    }

    sol.status = LpStatus::optimal;
    sol.value = tab.zval;
    sol.primal.assign(n, Rational(0));
    for (std::size_t i = 0; i < tab.T.size(); ++i)
        if (tab.basis[i] < n) sol.primal[tab.basis[i]] = tab.T[i].back();
    // The dual weight of canonical row i is the reduced cost of that row's
    // identity column (slack or artificial, both cost 0 here). This reading
    // stays valid for rows removed as redundant during phase 1: their
    // artificial columns keep recording how much of the original equation
    // the final aggregation uses.
    sol.dual.assign(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        Rational y = tab.zrow[tab.ident_col[i]];
        sol.dual[i] = tab.flipped[i] ? -y : y;
    }
    return sol;
}

} // namespace detail

inline LpSolution solve(const LpInstance& lp) {
    detail::CanonLp canon = detail::canonicalize(lp);
    if (canon.trivially_infeasible) {
        LpSolution sol;
        sol.status = LpStatus::infeasible;
        return sol;
    }
    const bool maximize = lp.objective_sense == Objective::maximize;
    std::vector<Rational> cmax = canon.c;
    if (!maximize)
        for (auto& cj : cmax) cj = -cj;
    LpSolution sol = detail::solve_canonical_max(canon, cmax);
    if (sol.status != LpStatus::optimal) return sol;

    // Map canonical solution back to the original variables and orientation.
    std::vector<Rational> x(lp.num_vars());
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        const detail::CanonVar& v = canon.vars[j];
        Rational t = sol.primal[v.pos];
        if (v.neg) t -= sol.primal[*v.neg];
        x[j] = v.negated ? Rational(v.shift - t) : Rational(v.shift + t);
    }
    Rational value = maximize ? sol.value : -sol.value;
    value += canon.constant;
    if (!maximize)
        for (auto& y : sol.dual) y = -y;
    sol.primal = std::move(x);
    sol.value = std::move(value);
    return sol;
}

// Certificate check: primal feasibility, dual feasibility, exact objective
// equality. Independent of the pivot path (only the canonicalization is
// shared, and that is a data transformation, not a search).
inline bool verify(const LpInstance& lp, const LpSolution& sol) {
    if (sol.status != LpStatus::optimal) return false;
    if (sol.primal.size() != lp.num_vars()) return false;
    detail::CanonLp canon = detail::canonicalize(lp);
    if (sol.dual.size() != canon.A.size()) return false;
    const bool maximize = lp.objective_sense == Objective::maximize;

    // Primal feasibility in the original space.
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        Bounds bj = lp.bound(j);
        if (bj.lower && sol.primal[j] < *bj.lower) return false;
        if (bj.upper && sol.primal[j] > *bj.upper) return false;
    }
    Rational obj(0);
    for (std::size_t j = 0; j < lp.num_vars(); ++j) obj += lp.objective[j] * sol.primal[j];
    if (obj != sol.value) return false;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        Rational lhs(0);
        for (std::size_t j = 0; j < lp.num_vars(); ++j) lhs += lp.rows[i][j] * sol.primal[j];
        switch (lp.senses[i]) {
            case Sense::le: if (lhs > lp.rhs[i]) return false; break;
            case Sense::ge: if (lhs < lp.rhs[i]) return false; break;
            case Sense::eq: if (lhs != lp.rhs[i]) return false; break;
        }
    }

    // Dual sign conditions per row sense.
    for (std::size_t i = 0; i < canon.A.size(); ++i) {
        const Rational& y = sol.dual[i];
        switch (canon.senses[i]) {
            case Sense::le: if (maximize ? y < 0 : y > 0) return false; break;
            case Sense::ge: if (maximize ? y > 0 : y < 0) return false; break;
            case Sense::eq: break;
        }
    }
    // Dual feasibility over canonical columns.
    for (std::size_t j = 0; j < canon.c.size(); ++j) {
        Rational lhs(0);
        for (std::size_t i = 0; i < canon.A.size(); ++i)
            if (canon.A[i][j] != 0) lhs += sol.dual[i] * canon.A[i][j];
        if (maximize ? lhs < canon.c[j] : lhs > canon.c[j]) return false;
    }
    // Exact strong duality.
    Rational dual_obj = canon.constant;
    for (std::size_t i = 0; i < canon.A.size(); ++i) dual_obj += sol.dual[i] * canon.b[i];
    return dual_obj == sol.value;
}

} // namespace kelleyscope
