#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kelleyscope/errors.hpp"
#include "kelleyscope/lp.hpp"
#include "kelleyscope/rational.hpp"

namespace kelleyscope {

// Brute-force LP oracle: enumerates every basic feasible solution of the
// slack-form system and takes the best objective. Exponential and proud of
// it; exists to check the simplex without trusting any of its machinery.
// Only default variable bounds ([0, +inf)) are supported, which is all the
// random cross-check instances use. Boundedness is the caller's problem:
// the reported value is the best over vertices.
struct OracleResult {
    bool feasible = false;
    Rational value;
    std::vector<Rational> vertex; // original variables
};

inline OracleResult oracle_solve(const LpInstance& lp) {
    lp.validate();
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        Bounds b = lp.bound(j);
        if (!b.lower || *b.lower != 0 || b.upper)
            throw structural_error("lp oracle: only default bounds are supported");
    }
    const std::size_t n = lp.num_vars();
    const std::size_t m = lp.num_rows();

    // Slack form: le rows get +s, ge rows get -s, s >= 0.
    std::size_t cols = n;
    std::vector<std::ptrdiff_t> slack_of_row(m, -1);
    for (std::size_t i = 0; i < m; ++i)
        if (lp.senses[i] != Sense::eq) slack_of_row[i] = static_cast<std::ptrdiff_t>(cols++);
    std::vector<std::vector<Rational>> M(m, std::vector<Rational>(cols + 1, Rational(0)));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) M[i][j] = lp.rows[i][j];
        if (slack_of_row[i] >= 0)
            M[i][slack_of_row[i]] = lp.senses[i] == Sense::le ? Rational(1) : Rational(-1);
        M[i][cols] = lp.rhs[i];
    }

    // Row-reduce [A|b]: detect inconsistency, keep an independent row set.
    std::size_t rank = 0;
    for (std::size_t j = 0; j < cols && rank < m; ++j) {
        std::size_t piv = rank;
        while (piv < m && M[piv][j] == 0) ++piv;
        if (piv == m) continue;
        std::swap(M[rank], M[piv]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == rank || M[i][j] == 0) continue;
            Rational f = M[i][j] / M[rank][j];
            for (std::size_t k = j; k <= cols; ++k)
                if (M[rank][k] != 0) M[i][k] -= f * M[rank][k];
        }
        ++rank;
    }
    OracleResult out;
    for (std::size_t i = rank; i < m; ++i)
        if (M[i][cols] != 0) return out; // 0 = nonzero: no solutions at all
    M.resize(rank);

    const bool maximize = lp.objective_sense == Objective::maximize;
    std::vector<Rational> cost(cols, Rational(0));
    for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective[j];

    std::vector<std::size_t> pick;
    std::vector<std::vector<Rational>> work;
    std::vector<Rational> xb;

    auto try_basis = [&]() {
        // Solve the rank x rank system over the picked columns by Gauss.
        work.assign(rank, std::vector<Rational>(rank + 1, Rational(0)));
        for (std::size_t i = 0; i < rank; ++i) {
            for (std::size_t k = 0; k < rank; ++k) work[i][k] = M[i][pick[k]];
            work[i][rank] = M[i][cols];
        }
        for (std::size_t c = 0; c < rank; ++c) {
            std::size_t piv = c;
            while (piv < rank && work[piv][c] == 0) ++piv;
            if (piv == rank) return; // singular basis
            std::swap(work[c], work[piv]);
            for (std::size_t i = 0; i < rank; ++i) {
                if (i == c || work[i][c] == 0) continue;
                Rational f = work[i][c] / work[c][c];
                for (std::size_t k = c; k <= rank; ++k)
                    if (work[c][k] != 0) work[i][k] -= f * work[c][k];
            }
        }
        xb.assign(rank, Rational(0));
        for (std::size_t i = 0; i < rank; ++i) {
            xb[i] = work[i][rank] / work[i][i];
            if (xb[i] < 0) return; // not feasible
        }
        Rational val(0);
        for (std::size_t i = 0; i < rank; ++i)
            if (cost[pick[i]] != 0) val += cost[pick[i]] * xb[i];
        bool better = !out.feasible || (maximize ? val > out.value : val < out.value);
        if (better) {
            out.feasible = true;
            out.value = val;
            out.vertex.assign(n, Rational(0));
            for (std::size_t i = 0; i < rank; ++i)
                if (pick[i] < n) out.vertex[pick[i]] = xb[i];
        }
    };

    // All column subsets of size `rank`.
    pick.resize(rank);
    if (rank == 0) {
        out.feasible = true;
        out.value = 0;
        out.vertex.assign(n, Rational(0));
        return out;
    }
    for (std::size_t i = 0; i < rank; ++i) pick[i] = i;
    for (;;) {
        try_basis();
        std::size_t i = rank;
        while (i > 0 && pick[i - 1] == cols - rank + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t k = i; k < rank; ++k) pick[k] = pick[k - 1] + 1;
    }
    return out;
}

} // namespace kelleyscope
