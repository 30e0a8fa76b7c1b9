#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "kelleyscope/algebra.hpp"
#include "kelleyscope/errors.hpp"
#include "kelleyscope/lp.hpp"
#include "kelleyscope/measure.hpp"
#include "kelleyscope/rational.hpp"

namespace kelleyscope {

// The intersection number of a family A is
//
//     I(A) = inf { i(s)/|s| : s a finite sequence from A },
//
// where i(s) is the size of the largest subfamily of s with nonzero meet.
// In a set algebra a subfamily has nonzero meet exactly when some atom lies
// in all of its members, so i(s) is the largest total multiplicity carried
// by a single atom. Every finite Boolean algebra is a set algebra, so
// nothing is lost at this scale; the reduction is specific to set algebras
// and is documented in the README.
//
// I(A) is computed exactly as the value of the minimax LP
//
//     max { t : mu >= 0, sum(mu) = 1, mu(a) >= t for all a in A },
//
// whose optimal basis delivers both certificates at once: the primal vector
// is the witness measure, and the row duals, cleared of denominators, are
// the multiplicities of a witness sequence attaining the same ratio.

// A sequence from the family with multiplicities; the primal certificate.
struct WeightedSequence {
    // (element index, multiplicity > 0), strictly increasing indices.
    std::vector<std::pair<std::size_t, Integer>> multiplicities;

    bool empty() const { return multiplicities.empty(); }
    Integer length() const {
        Integer t(0);
        for (const auto& [i, m] : multiplicities) t += m;
        return t;
    }
};

struct IntersectionCertificate {
    Rational value;
    Measure witness_measure;
    WeightedSequence witness_sequence;
    bool lp_verified = false;
};

// i(s): the largest total multiplicity of elements sharing an atom.
inline Integer intersection_index(const Family& f, const WeightedSequence& s) {
    if (s.empty()) throw value_error("intersection index of an empty sequence");
    std::vector<Integer> load(f.ground.size, Integer(0));
    for (const auto& [idx, mult] : s.multiplicities) {
        if (idx >= f.size()) throw structural_error("sequence references element out of range");
        if (mult <= 0) throw structural_error("sequence multiplicities must be positive");
        f[idx].atoms.for_each_atom([&](std::size_t x) { load[x] += mult; });
    }
    Integer best(0);
    for (const auto& l : load)
        if (l > best) best = l;
    return best; // >= 1: elements are nonzero
}

enum class EmptyFamilyPolicy { convention_one, reject };

inline LpInstance make_intersection_lp(const Family& f) {
    const std::size_t n = f.ground.size;
    const std::size_t m = f.size();
    LpInstance lp;
    lp.objective_sense = Objective::maximize;
    lp.objective.assign(n + 1, Rational(0));
    lp.objective[n] = 1; // t
    lp.rows.assign(m + 1, std::vector<Rational>(n + 1, Rational(0)));
    for (std::size_t a = 0; a < m; ++a) {
        f[a].atoms.for_each_atom([&](std::size_t x) { lp.rows[a][x] = 1; });
        lp.rows[a][n] = -1;
        lp.senses.push_back(Sense::ge);
        lp.rhs.push_back(Rational(0));
    }
    for (std::size_t x = 0; x < n; ++x) lp.rows[m][x] = 1;
    lp.senses.push_back(Sense::eq);
    lp.rhs.push_back(Rational(1));
    return lp;
}

// Exact value with both certificates. I(empty) = 1 by convention (the
// infimum over no sequences, clamped to the attainable maximum); pass
// EmptyFamilyPolicy::reject to make the empty family an error instead.
inline IntersectionCertificate intersection_number_exact(
    const Family& f, EmptyFamilyPolicy empty_policy = EmptyFamilyPolicy::convention_one) {
    if (f.empty()) {
        if (empty_policy == EmptyFamilyPolicy::reject)
            throw value_error("intersection number of an empty family");
        IntersectionCertificate cert;
        cert.value = 1;
        cert.lp_verified = true;
        return cert;
    }
    const std::size_t n = f.ground.size;
    const std::size_t m = f.size();
    LpInstance lp = make_intersection_lp(f);
    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::optimal)
        throw error("intersection LP unexpectedly " +
                    std::string(sol.status == LpStatus::infeasible ? "infeasible" : "unbounded"));

    IntersectionCertificate cert;
    cert.value = sol.value;
    cert.witness_measure = Measure(
        std::vector<Rational>(sol.primal.begin(), sol.primal.begin() + n));

    // Element-row duals are <= 0 (max problem, >= rows); their negations are
    // the optimal sequence weights, summing to 1 by complementary slackness
    // since t* = I(A) > 0.
    Rational wsum(0);
    Integer denom_lcm(1);
    std::vector<Rational> w(m);
    for (std::size_t a = 0; a < m; ++a) {
        w[a] = -sol.dual[a];
        if (w[a] < 0) throw error("intersection LP: dual sign violated");
        if (w[a] > 0) denom_lcm = boost::multiprecision::lcm(denom_lcm, den(w[a]));
        wsum += w[a];
    }
    if (wsum != 1) throw error("intersection LP: dual weights do not sum to 1");
    for (std::size_t a = 0; a < m; ++a) {
        if (w[a] == 0) continue;
        Integer mult = num(w[a]) * (denom_lcm / den(w[a]));
        cert.witness_sequence.multiplicities.emplace_back(a, std::move(mult));
    }
    if (intersection_index(f, cert.witness_sequence) != cert.value * Rational(denom_lcm))
        throw error("intersection LP: witness sequence does not attain the value");
    cert.lp_verified = verify(lp, sol);
    return cert;
}

struct BruteForceResult {
    Rational value;
    WeightedSequence witness;
    Integer enumerated; // number of multisets inspected
};

// Direct evaluation of the infimum over all multisets of total size <= L.
// Always an upper bound on the exact value, non-increasing in L, equal once
// L reaches the total multiplicity of an optimal witness. The multiset count
// is checked against the budget up front; exceeding it is an error, never a
// silent truncation.
inline BruteForceResult intersection_number_bruteforce(const Family& f, Integer L,
                                                       const Integer& budget = Integer(1) << 20) {
    if (f.empty()) throw value_error("brute-force intersection number of an empty family");
    if (L < 1) throw value_error("brute-force bound must be >= 1");
    const std::size_t m = f.size();
    const std::size_t n = f.ground.size;

    // Total count: sum over k <= L of C(m + k - 1, k).
    Integer total(0), binom(1); // C(m - 1, 0)
    for (Integer k = 1; k <= L; ++k) {
        binom = binom * (Integer(m) + k - 1) / k;
        total += binom;
    }
    if (total > budget)
        throw budget_error("brute force would enumerate " + total.str() +
                           " multisets, budget is " + budget.str());

    BruteForceResult out;
    out.enumerated = 0;
    std::vector<Integer> load(n, Integer(0));
    std::vector<Integer> mults(m, Integer(0));
    bool have = false;

    auto leaf = [&](const Integer& size) {
        ++out.enumerated;
        Integer imax(0);
        for (const auto& l : load)
            if (l > imax) imax = l;
        Rational ratio = make_rational(imax, size);
        if (!have || ratio < out.value) {
            have = true;
            out.value = ratio;
            out.witness.multiplicities.clear();
            for (std::size_t i = 0; i < m; ++i)
                if (mults[i] > 0) out.witness.multiplicities.emplace_back(i, mults[i]);
        }
    };

    // Multisets of total size exactly k, sizes ascending, so the first
    // minimum found is a smallest witness.
    auto rec = [&](auto&& self, std::size_t idx, const Integer& remaining,
                   const Integer& size) -> void {
        if (idx + 1 == m) {
            if (remaining > 0) {
                mults[idx] = remaining;
                f[idx].atoms.for_each_atom([&](std::size_t x) { load[x] += remaining; });
            }
            leaf(size);
            if (remaining > 0) {
                f[idx].atoms.for_each_atom([&](std::size_t x) { load[x] -= remaining; });
                mults[idx] = 0;
            }
            return;
        }
        for (Integer take(0); take <= remaining; ++take) {
            if (take > 0) {
                mults[idx] = take;
                f[idx].atoms.for_each_atom([&](std::size_t x) { load[x] += take; });
            }
            self(self, idx + 1, remaining - take, size);
            if (take > 0) {
                f[idx].atoms.for_each_atom([&](std::size_t x) { load[x] -= take; });
                mults[idx] = 0;
            }
        }
    };
    for (Integer k = 1; k <= L; ++k) rec(rec, 0, k, k);
    return out;
}

// Checks the three exact equalities a certificate claims: the measure side
// min, the sequence side ratio, and their agreement with the stated value.
// Inspects nothing else (in particular not uniqueness of the witnesses).
inline bool verify_certificate(const IntersectionCertificate& cert, const Family& f) {
    if (f.empty())
        return cert.value == 1 && cert.witness_sequence.empty() &&
               cert.witness_measure.weights.empty();
    if (cert.witness_measure.universe() != f.ground.size) return false;
    Rational min_mu;
    for (std::size_t a = 0; a < f.size(); ++a) {
        Rational v = cert.witness_measure(f[a]);
        if (a == 0 || v < min_mu) min_mu = v;
    }
    if (min_mu != cert.value) return false;
    if (cert.witness_sequence.empty()) return false;
    for (const auto& [idx, mult] : cert.witness_sequence.multiplicities)
        if (idx >= f.size() || mult <= 0) return false;
    Integer i = intersection_index(f, cert.witness_sequence);
    return make_rational(i, cert.witness_sequence.length()) == cert.value;
}

} // namespace kelleyscope
