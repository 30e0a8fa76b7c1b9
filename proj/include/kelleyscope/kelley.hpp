#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kelleyscope/algebra.hpp"
#include "kelleyscope/errors.hpp"
#include "kelleyscope/intersection.hpp"
#include "kelleyscope/measure.hpp"
#include "kelleyscope/rational.hpp"

namespace kelleyscope {

// Constructive content of the strictly-positive-measure correspondence at
// finite scale, in both directions:
//   measure -> cover: threshold classes C_q = { a : mu(a) >= q } have
//     intersection number >= q;
//   cover -> measure: weight class j by 2^-(j+1), normalize; the result is
//     bounded below on class j by normalization * 2^-(j+1) * threshold_j.
// On top of that, the minimal-cover search: the least number of classes
// with intersection number strictly above 1 - epsilon needed to cover a
// family, exactly (branch and bound) or greedily.

struct CoverCertificate {
    Family family;
    std::vector<std::vector<std::size_t>> classes; // indices into family
    std::vector<Rational> thresholds;
    std::vector<Measure> witnesses;
    bool covers_all = false;
};

// Structural + witness checks; throws certificate_error naming the first
// failing class. covers_all is checked as an implication only.
inline void validate_cover(const CoverCertificate& cover) {
    const std::size_t k = cover.classes.size();
    if (cover.thresholds.size() != k || cover.witnesses.size() != k)
        throw structural_error("cover: classes/thresholds/witnesses sizes disagree");
    std::vector<bool> seen(cover.family.size(), false);
    for (std::size_t j = 0; j < k; ++j) {
        if (cover.classes[j].empty())
            throw certificate_error("cover class " + std::to_string(j) + " is empty", j);
        if (cover.witnesses[j].universe() != cover.family.ground.size)
            throw certificate_error("cover class " + std::to_string(j) +
                                    ": witness lives on a different ground", j);
        for (std::size_t idx : cover.classes[j]) {
            if (idx >= cover.family.size())
                throw structural_error("cover class " + std::to_string(j) +
                                       ": element index " + std::to_string(idx) + " out of range");
            if (cover.witnesses[j](cover.family[idx]) < cover.thresholds[j])
                throw certificate_error("cover class " + std::to_string(j) +
                                        ": witness measure drops below the threshold on element " +
                                        std::to_string(idx), j);
            seen[idx] = true;
        }
    }
    if (cover.covers_all)
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                throw certificate_error("cover claims covers_all but element " +
                                        std::to_string(i) + " is uncovered");
}

inline bool is_strictly_positive(const Measure& mu, const Family& f) {
    for (const auto& e : f.elements)
        if (mu(e) <= 0) return false;
    return true;
}

// Full-algebra check: every nonzero element of P(atoms) gets positive
// measure iff every atom does.
inline bool is_strictly_positive_on_algebra(const Measure& mu) {
    for (const auto& w : mu.weights)
        if (w <= 0) return false;
    return true;
}

// All 2^n - 1 nonzero elements of P([0,n)), in bitmask order. Combinatorially
// degenerate for the cover search below 1/2: the n atoms are pairwise
// disjoint, so any eps < 1/2 forces k = n. Interesting instances are proper
// families; this one exists for calibration.
inline Family full_algebra_bplus(std::size_t n) {
    if (n < 1 || n > 20) throw value_error("full_algebra_bplus: need 1 <= n <= 20");
    std::vector<Element> elems;
    elems.reserve((std::size_t(1) << n) - 1);
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        AtomSet a(n);
        for (std::size_t x = 0; x < n; ++x)
            if (mask >> x & 1) a.add(x);
        elems.emplace_back(std::move(a));
    }
    return Family(GroundSet(n), std::move(elems));
}

struct SynthesizedMeasure {
    Measure measure;
    Rational normalization;            // c with mu = c * sum_j 2^-(j+1) w_j
    std::vector<Rational> class_bounds; // guaranteed lower bound per class
};

// Cover -> measure. Requires strictly positive thresholds and witnesses
// that actually verify their classes.
inline SynthesizedMeasure synthesize_measure_from_cover(const CoverCertificate& cover) {
    if (cover.classes.empty()) throw value_error("cannot synthesize a measure from an empty cover");
    for (std::size_t j = 0; j < cover.thresholds.size(); ++j)
        if (cover.thresholds[j] <= 0)
            throw value_error("cover class " + std::to_string(j) + " has threshold <= 0");
    validate_cover(cover);

    const std::size_t n = cover.family.ground.size;
    const std::size_t k = cover.classes.size();
    std::vector<Rational> acc(n, Rational(0));
    Rational mass(0);
    for (std::size_t j = 0; j < k; ++j) {
        Rational wj = make_rational(Integer(1), Integer(1) << (j + 1));
        mass += wj;
        for (std::size_t x = 0; x < n; ++x)
            if (cover.witnesses[j].weights[x] != 0) acc[x] += wj * cover.witnesses[j].weights[x];
    }
    SynthesizedMeasure out;
    out.normalization = Rational(1) / mass; // = 1/(1 - 2^-k)
    for (auto& v : acc) v *= out.normalization;
    out.measure = Measure(std::move(acc));
    for (std::size_t j = 0; j < k; ++j)
        out.class_bounds.push_back(out.normalization *
                                   make_rational(Integer(1), Integer(1) << (j + 1)) *
                                   cover.thresholds[j]);
    return out;
}

// Measure -> cover along a strictly descending grid of thresholds in (0,1].
// Empty classes are dropped; covers_all records whether the coarsest
// threshold catches every element.
inline CoverCertificate cover_from_measure(const Measure& mu, const Family& f,
                                           const std::vector<Rational>& grid) {
    if (mu.universe() != f.ground.size)
        throw structural_error("cover_from_measure: measure lives on a different ground");
    if (grid.empty()) throw value_error("cover_from_measure: empty threshold grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= 0 || grid[i] > 1)
            throw value_error("cover_from_measure: grid values must lie in (0,1]");
        if (i > 0 && grid[i] >= grid[i - 1])
            throw value_error("cover_from_measure: grid must be strictly descending");
    }
    std::vector<Rational> values;
    values.reserve(f.size());
    for (const auto& e : f.elements) values.push_back(mu(e));

    CoverCertificate cover{f, {}, {}, {}, false};
    for (const auto& q : grid) {
        std::vector<std::size_t> cls;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (values[i] >= q) cls.push_back(i);
        if (cls.empty()) continue;
        cover.classes.push_back(std::move(cls));
        cover.thresholds.push_back(q);
        cover.witnesses.push_back(mu);
    }
    cover.covers_all = true;
    for (const auto& v : values)
        if (v < grid.back()) { cover.covers_all = false; break; }
    return cover;
}

struct ClassFeasibility {
    bool feasible = false;
    Rational value; // exact intersection number of the class
    std::optional<Measure> witness;
};

// Is the class's intersection number above delta? strict decides > vs >=.
inline ClassFeasibility class_feasible(const Family& f, const std::vector<std::size_t>& class_indices,
                                       const Rational& delta, bool strict = true) {
    if (class_indices.empty()) throw value_error("class_feasible: empty class");
    std::vector<Element> elems;
    elems.reserve(class_indices.size());
    for (std::size_t idx : class_indices) {
        if (idx >= f.size()) throw structural_error("class_feasible: index out of range");
        elems.push_back(f[idx]);
    }
    IntersectionCertificate cert = intersection_number_exact(Family(f.ground, std::move(elems)));
    ClassFeasibility out;
    out.value = cert.value;
    out.feasible = strict ? cert.value > delta : cert.value >= delta;
    if (out.feasible) out.witness = cert.witness_measure;
    return out;
}

enum class MNMode { exact, greedy };

struct MNReport {
    Rational epsilon;
    std::size_t k = 0;
    CoverCertificate certificate;
    MNMode mode = MNMode::greedy;
    bool optimal = false;
};

struct MNOptions {
    bool strict = true;              // class feasibility: I > 1-eps (vs >=)
    std::uint64_t budget = 1u << 20; // LP solves + search nodes in exact mode
};

namespace detail {

// Search state over deduplicated elements, masks over distinct reps.
struct MNSearch {
    const Family& f;
    Rational delta;
    bool strict;
    std::uint64_t budget;
    std::uint64_t spent = 0;
    bool exact_mode = false;

    std::vector<Element> reps;                      // distinct elements
    std::vector<std::vector<std::size_t>> rep_idx;  // rep -> original indices
    std::map<std::uint64_t, std::pair<Rational, Measure>> lp_cache; // mask -> (value, measure)
    std::map<std::uint64_t, bool> conflict_cache;   // pair mask -> infeasible?

    explicit MNSearch(const Family& fam, Rational d, bool s, std::uint64_t b)
        : f(fam), delta(std::move(d)), strict(s), budget(b) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            auto it = std::find(reps.begin(), reps.end(), f[i]);
            if (it == reps.end()) {
                reps.push_back(f[i]);
                rep_idx.push_back({i});
            } else {
                rep_idx[static_cast<std::size_t>(it - reps.begin())].push_back(i);
            }
        }
    }

    std::size_t d() const { return reps.size(); }

    void charge(const char* what) {
        if (++spent > budget)
            throw budget_error(std::string("mn cover search exceeded its budget (") +
                               std::to_string(budget) + " " + what + " and counting)" +
                               (exact_mode ? "; try greedy mode" : ""));
    }

    const std::pair<Rational, Measure>& eval(std::uint64_t mask) {
        auto it = lp_cache.find(mask);
        if (it != lp_cache.end()) return it->second;
        charge("operations");
        std::vector<Element> elems;
        for (std::size_t i = 0; i < d(); ++i)
            if (mask >> i & 1) elems.push_back(reps[i]);
        IntersectionCertificate cert = intersection_number_exact(Family(f.ground, std::move(elems)));
        return lp_cache.emplace(mask, std::make_pair(cert.value, cert.witness_measure)).first->second;
    }

    bool feasible(std::uint64_t mask) {
        const Rational& v = eval(mask).first;
        return strict ? v > delta : v >= delta;
    }

    bool conflict(std::size_t i, std::size_t j) {
        std::uint64_t mask = (1ull << i) | (1ull << j);
        auto it = conflict_cache.find(mask);
        if (it != conflict_cache.end()) return it->second;
        bool c = !feasible(mask);
        conflict_cache.emplace(mask, c);
        return c;
    }

    // Pairwise-infeasible elements within `mask` need pairwise-distinct
    // classes; a greedy clique of them lower-bounds the cover size.
    std::size_t clique_bound(std::uint64_t mask) {
        std::vector<std::size_t> clique;
        for (std::size_t i = 0; i < d(); ++i) {
            if (!(mask >> i & 1)) continue;
            bool all = true;
            for (std::size_t c : clique)
                if (!conflict(c, i)) { all = false; break; }
            if (all) clique.push_back(i);
        }
        return clique.size();
    }

    std::vector<std::uint64_t> greedy_cover() {
        std::vector<std::uint64_t> classes;
        std::uint64_t all = d() == 64 ? ~0ull : (1ull << d()) - 1;
        std::uint64_t covered = 0;
        while (covered != all) {
            std::size_t e = 0;
            while (covered >> e & 1) ++e;
            std::uint64_t cls = 1ull << e;
            for (std::size_t j = 0; j < d(); ++j) {
                if (j == e || (covered >> j & 1) || (cls >> j & 1)) continue;
                if (feasible(cls | (1ull << j))) cls |= 1ull << j;
            }
            classes.push_back(cls);
            covered |= cls;
        }
        return classes;
    }

    // All maximal feasible subsets of `pool` containing its lowest element,
    // in index order. Feasibility is downward closed, so include/exclude
    // branching with a final maximality check is sound.
    void maximal_classes(std::uint64_t pool, std::vector<std::uint64_t>& out) {
        std::size_t e = 0;
        while (!(pool >> e & 1)) ++e;
        std::vector<std::size_t> cand;
        for (std::size_t j = e + 1; j < d(); ++j)
            if (pool >> j & 1) cand.push_back(j);
        auto rec = [&](auto&& self, std::uint64_t cur, std::size_t i) -> void {
            charge("operations");
            if (i == cand.size()) {
                for (std::size_t j : cand)
                    if (!(cur >> j & 1) && feasible(cur | (1ull << j))) return; // not maximal
                out.push_back(cur);
                return;
            }
            if (feasible(cur | (1ull << cand[i]))) self(self, cur | (1ull << cand[i]), i + 1);
            self(self, cur, i + 1);
        };
        rec(rec, 1ull << e, 0);
    }

    void branch_and_bound(std::uint64_t uncovered, std::vector<std::uint64_t>& chosen,
                          std::vector<std::uint64_t>& best) {
        if (uncovered == 0) {
            if (chosen.size() < best.size()) best = chosen;
            return;
        }
        charge("operations");
        if (chosen.size() + clique_bound(uncovered) >= best.size()) return;
        std::vector<std::uint64_t> classes;
        maximal_classes(uncovered, classes);
        for (std::uint64_t cls : classes) {
            chosen.push_back(cls);
            branch_and_bound(uncovered & ~cls, chosen, best);
            chosen.pop_back();
        }
    }

    std::vector<std::size_t> expand(std::uint64_t mask) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < d(); ++i)
            if (mask >> i & 1)
                for (std::size_t orig : rep_idx[i]) idx.push_back(orig);
        std::sort(idx.begin(), idx.end());
        return idx;
    }
};

} // namespace detail

// Minimal number of classes with intersection number above 1 - epsilon
// covering the family. Exact mode proves minimality by branch and bound
// over maximal feasible classes (greedy incumbent, conflict-clique lower
// bound); greedy mode grows classes element by element, re-checking LP
// feasibility at every step, and makes no optimality claim.
inline MNReport mn_min_cover(const Family& f, const Rational& epsilon, MNMode mode,
                             const MNOptions& opts = {}) {
    if (epsilon <= 0 || epsilon >= 1)
        throw value_error("mn_min_cover: epsilon must lie in the open interval (0,1)");
    MNReport report{epsilon, 0, CoverCertificate{f, {}, {}, {}, true}, mode, false};
    if (f.empty()) { // k = 0 only here
        report.k = 0;
        report.optimal = mode == MNMode::exact;
        return report;
    }

    detail::MNSearch search(f, Rational(1) - epsilon, opts.strict, opts.budget);
    search.exact_mode = mode == MNMode::exact;
    if (mode == MNMode::exact && search.d() > 64)
        throw budget_error("mn exact search supports at most 64 distinct elements (got " +
                           std::to_string(search.d()) + "); try greedy mode");

    std::vector<std::uint64_t> classes = search.greedy_cover();
    if (mode == MNMode::exact) {
        std::uint64_t all = search.d() == 64 ? ~0ull : (1ull << search.d()) - 1;
        if (classes.size() > search.clique_bound(all)) {
            std::vector<std::uint64_t> best = classes, chosen;
            search.branch_and_bound(all, chosen, best);
            classes = best;
        }
        report.optimal = true;
    }

    report.k = classes.size();
    for (std::uint64_t mask : classes) {
        const auto& [value, witness] = search.eval(mask);
        report.certificate.classes.push_back(search.expand(mask));
        report.certificate.thresholds.push_back(value);
        report.certificate.witnesses.push_back(witness);
    }
    validate_cover(report.certificate);
    return report;
}

} // namespace kelleyscope
