#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "kelleyscope/algebra.hpp"
#include "kelleyscope/errors.hpp"
#include "kelleyscope/intersection.hpp"
#include "kelleyscope/kelley.hpp"
#include "kelleyscope/rational.hpp"
#include "kelleyscope/rng.hpp"

namespace kelleyscope {

// Reproducible instance catalog. Structured kinds have closed-form
// intersection numbers (atoms: 1/n, k-subsets: k/n); random and
// measure-threshold kinds sample from seeded streams; ideal truncations
// realize finite positivity proxies for a small catalog of ideals on omega.
//
// The proxies replace genuine I-positivity, which has no finite definition,
// by threshold conditions on [0,N):
//   density(d):   |a| >= ceil(d*N)
//   summable(t):  sum_{i in a} 1/(i+1) >= t          (exact rationals)
//   grid(c,r):    a, living on the N x N grid flattened column-major,
//                 has at least c columns with at least r cells each
// Every emitted element is re-checked against its proxy after generation.

enum class InstanceKind { atoms, ksubsets, intervals, random, measure_threshold, ideal_truncation };
enum class IdealName { density, summable, grid };
enum class TruncationMode { structured, sampled };

constexpr std::size_t kDefaultFamilyBudget = 40;

struct IdealSpec {
    IdealName name = IdealName::density;
    Rational density;                       // in (0,1)
    Rational theta;                         // > 0
    std::size_t grid_cols = 0, grid_rows = 0; // c, r
    std::size_t N = 1;
};

struct InstanceSpec {
    InstanceKind kind = InstanceKind::atoms;
    std::size_t n = 0, m = 0, k = 0;
    Rational p;     // random: per-atom inclusion probability, in (0,1]
    Rational delta; // measure_threshold: in (0,1]
    IdealSpec ideal;
    TruncationMode mode = TruncationMode::structured;
    std::size_t budget = kDefaultFamilyBudget; // family-size budget
    std::uint64_t seed = 0;
};

namespace detail {

inline std::size_t ceil_mul(const Rational& q, std::size_t n) {
    Integer v = (num(q) * n + den(q) - 1) / den(q);
    return static_cast<std::size_t>(v);
}

inline Integer binomial(std::size_t n, std::size_t k) {
    if (k > n) return Integer(0);
    Integer b(1);
    for (std::size_t i = 1; i <= k; ++i) b = b * Integer(n - k + i) / Integer(i);
    return b;
}

inline void next_combination_or_end(std::vector<std::size_t>& pick, std::size_t n, bool& done) {
    std::size_t k = pick.size();
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) { done = true; return; }
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
}

// Uniform subset of [0,n) conditioned on |a| >= smin: draw the size with
// probability proportional to C(n, s), then a uniform subset of that size.
inline AtomSet sample_subset_min_size(SplitMix64& rng, std::size_t n, std::size_t smin) {
    Integer total(0);
    std::vector<Integer> weight(n + 1, Integer(0));
    for (std::size_t s = smin; s <= n; ++s) {
        weight[s] = binomial(n, s);
        total += weight[s];
    }
    Integer u = rng.below_big(total);
    std::size_t size = smin;
    for (std::size_t s = smin; s <= n; ++s) {
        if (u < weight[s]) { size = s; break; }
        u -= weight[s];
    }
    return AtomSet::of(n, rng.choose(n, size));
}

} // namespace detail

inline Rational harmonic_weight(const Element& e) {
    Rational w(0);
    e.atoms.for_each_atom([&](std::size_t i) { w += make_rational(Integer(1), Integer(i + 1)); });
    return w;
}

inline Rational harmonic_total(std::size_t N) {
    Rational h(0);
    for (std::size_t i = 0; i < N; ++i) h += make_rational(Integer(1), Integer(i + 1));
    return h;
}

// Does the element satisfy the ideal's positivity proxy?
inline bool ideal_positive(const IdealSpec& ideal, const Element& e) {
    switch (ideal.name) {
        case IdealName::density:
            return e.atoms.count() >= detail::ceil_mul(ideal.density, ideal.N);
        case IdealName::summable:
            return harmonic_weight(e) >= ideal.theta;
        case IdealName::grid: {
            std::size_t good = 0;
            for (std::size_t c = 0; c < ideal.N; ++c) {
                std::size_t in_col = 0;
                for (std::size_t r = 0; r < ideal.N; ++r)
                    if (e.atoms.test(c * ideal.N + r)) ++in_col;
                if (in_col >= ideal.grid_rows) ++good;
            }
            return good >= ideal.grid_cols;
        }
    }
    return false;
}

inline void validate_ideal(const IdealSpec& ideal) {
    if (ideal.N < 1) throw value_error("ideal truncation: N must be >= 1");
    switch (ideal.name) {
        case IdealName::density:
            if (ideal.density <= 0 || ideal.density >= 1)
                throw value_error("density ideal: d must lie in (0,1)");
            break;
        case IdealName::summable: {
            if (ideal.theta <= 0) throw value_error("summable ideal: theta must be > 0");
            Rational h = harmonic_total(ideal.N);
            if (ideal.theta > h)
                throw value_error("summable proxy unsatisfiable: total harmonic weight of [0," +
                                  std::to_string(ideal.N) + ") is " + to_string(h) +
                                  " < theta = " + to_string(ideal.theta));
            break;
        }
        case IdealName::grid:
            if (ideal.grid_cols < 1 || ideal.grid_cols > ideal.N)
                throw value_error("grid proxy unsatisfiable: need 1 <= c <= N");
            if (ideal.grid_rows < 1 || ideal.grid_rows > ideal.N)
                throw value_error("grid proxy unsatisfiable: need 1 <= r <= N");
            break;
    }
}

// Finite families of proxy-positive sets standing in for I+.
//
// structured mode:
//   density:  all ceil(dN)-subsets when their count fits the budget, else
//             all length-ceil(dN) intervals plus budget-many sampled
//             minimal positive sets;
//   summable: per start i, the shortest interval [i,j) of weight >= theta;
//   grid:     unions of c full columns (all C(N,c) of them when within
//             budget, else the N-c+1 consecutive choices plus budget-many
//             sampled column sets).
// sampled mode emits budget-many positive sets from the seeded stream
// (density: uniform conditioned on the proxy; summable: shortest prefix of
// a seeded permutation reaching theta; grid: c seeded columns with r seeded
// rows each).
inline Family ideal_truncation(const IdealSpec& ideal, TruncationMode mode, std::size_t budget,
                               std::uint64_t seed) {
    validate_ideal(ideal);
    const std::size_t N = ideal.N;
    SplitMix64 rng(seed);
    std::vector<Element> elems;

    auto sample_density = [&](std::size_t count, std::size_t t, bool minimal) {
        for (std::size_t i = 0; i < count; ++i)
            elems.emplace_back(minimal ? AtomSet::of(N, rng.choose(N, t))
                                       : detail::sample_subset_min_size(rng, N, t));
    };

    switch (ideal.name) {
        case IdealName::density: {
            const std::size_t t = detail::ceil_mul(ideal.density, N);
            if (mode == TruncationMode::structured) {
                if (detail::binomial(N, t) <= budget) {
                    std::vector<std::size_t> pick(t);
                    for (std::size_t i = 0; i < t; ++i) pick[i] = i;
                    bool done = false;
                    while (!done) {
                        elems.emplace_back(AtomSet::of(N, pick));
                        detail::next_combination_or_end(pick, N, done);
                    }
                } else {
                    for (std::size_t i = 0; i + t <= N; ++i) {
                        AtomSet a(N);
                        for (std::size_t j = 0; j < t; ++j) a.add(i + j);
                        elems.emplace_back(std::move(a));
                    }
                    sample_density(budget, t, true);
                }
            } else {
                sample_density(std::max<std::size_t>(budget, 1), t, false);
            }
            break;
        }
        case IdealName::summable: {
            if (mode == TruncationMode::structured) {
                for (std::size_t i = 0; i < N; ++i) {
                    Rational w(0);
                    AtomSet a(N);
                    bool reached = false;
                    for (std::size_t j = i; j < N; ++j) {
                        a.add(j);
                        w += make_rational(Integer(1), Integer(j + 1));
                        if (w >= ideal.theta) { reached = true; break; }
                    }
                    if (reached) elems.emplace_back(std::move(a));
                }
            } else {
                for (std::size_t s = 0; s < std::max<std::size_t>(budget, 1); ++s) {
                    auto perm = rng.permutation(N);
                    Rational w(0);
                    AtomSet a(N);
                    for (std::size_t idx : perm) {
                        a.add(idx);
                        w += make_rational(Integer(1), Integer(idx + 1));
                        if (w >= ideal.theta) break;
                    }
                    elems.emplace_back(std::move(a));
                }
            }
            break;
        }
        case IdealName::grid: {
            const std::size_t c = ideal.grid_cols, r = ideal.grid_rows;
            auto full_columns = [&](const std::vector<std::size_t>& cols) {
                AtomSet a(N * N);
                for (std::size_t col : cols)
                    for (std::size_t row = 0; row < N; ++row) a.add(col * N + row);
                return a;
            };
            if (mode == TruncationMode::structured) {
                if (detail::binomial(N, c) <= budget) {
                    std::vector<std::size_t> pick(c);
                    for (std::size_t i = 0; i < c; ++i) pick[i] = i;
                    bool done = false;
                    while (!done) {
                        elems.emplace_back(full_columns(pick));
                        detail::next_combination_or_end(pick, N, done);
                    }
                } else {
                    for (std::size_t i = 0; i + c <= N; ++i) {
                        std::vector<std::size_t> cols(c);
                        for (std::size_t j = 0; j < c; ++j) cols[j] = i + j;
                        elems.emplace_back(full_columns(cols));
                    }
                    for (std::size_t s = 0; s < budget; ++s)
                        elems.emplace_back(full_columns(rng.choose(N, c)));
                }
            } else {
                for (std::size_t s = 0; s < std::max<std::size_t>(budget, 1); ++s) {
                    AtomSet a(N * N);
                    for (std::size_t col : rng.choose(N, c))
                        for (std::size_t row : rng.choose(N, r)) a.add(col * N + row);
                    elems.emplace_back(std::move(a));
                }
            }
            break;
        }
    }

    const std::size_t ground = ideal.name == IdealName::grid ? N * N : N;
    Family f(GroundSet(ground), std::move(elems));
    for (const auto& e : f.elements)
        if (!ideal_positive(ideal, e))
            throw error("ideal truncation emitted a non-positive element"); // generator bug
    return f;
}

inline Family generate(const InstanceSpec& spec) {
    switch (spec.kind) {
        case InstanceKind::atoms: {
            if (spec.n < 1) throw value_error("atoms: n must be >= 1");
            std::vector<Element> elems;
            for (std::size_t i = 0; i < spec.n; ++i)
                elems.push_back(Element::of(spec.n, {i}));
            return Family(GroundSet(spec.n), std::move(elems));
        }
        case InstanceKind::ksubsets: {
            if (spec.n < 1 || spec.k < 1 || spec.k > spec.n)
                throw value_error("ksubsets: need 1 <= k <= n");
            std::vector<Element> elems;
            std::vector<std::size_t> pick(spec.k);
            for (std::size_t i = 0; i < spec.k; ++i) pick[i] = i;
            bool done = false;
            while (!done) {
                elems.emplace_back(AtomSet::of(spec.n, pick));
                detail::next_combination_or_end(pick, spec.n, done);
            }
            return Family(GroundSet(spec.n), std::move(elems));
        }
        case InstanceKind::intervals: {
            if (spec.n < 1) throw value_error("intervals: n must be >= 1");
            std::vector<Element> elems;
            for (std::size_t i = 0; i < spec.n; ++i)
                for (std::size_t j = i + 1; j <= spec.n; ++j) {
                    AtomSet a(spec.n);
                    for (std::size_t x = i; x < j; ++x) a.add(x);
                    elems.emplace_back(std::move(a));
                }
            return Family(GroundSet(spec.n), std::move(elems)); // n(n+1)/2 of them
        }
        case InstanceKind::random: {
            if (spec.n < 1 || spec.m < 1) throw value_error("random: need n >= 1 and m >= 1");
            if (spec.p <= 0 || spec.p > 1)
                throw value_error("random: inclusion probability must lie in (0,1]");
            SplitMix64 rng(spec.seed);
            std::vector<Element> elems;
            while (elems.size() < spec.m) {
                AtomSet a(spec.n);
                for (std::size_t x = 0; x < spec.n; ++x)
                    if (rng.bernoulli(spec.p)) a.add(x);
                if (!a.empty()) elems.emplace_back(std::move(a)); // empty draws redrawn
            }
            return Family(GroundSet(spec.n), std::move(elems));
        }
        case InstanceKind::measure_threshold: {
            if (spec.n < 1 || spec.m < 1)
                throw value_error("measure_threshold: need n >= 1 and m >= 1");
            if (spec.delta <= 0 || spec.delta > 1)
                throw value_error("measure_threshold: delta must lie in (0,1]");
            const std::size_t smin = detail::ceil_mul(spec.delta, spec.n);
            SplitMix64 rng(spec.seed);
            std::vector<Element> elems;
            for (std::size_t i = 0; i < spec.m; ++i)
                elems.emplace_back(detail::sample_subset_min_size(rng, spec.n, smin));
            return Family(GroundSet(spec.n), std::move(elems));
        }
        case InstanceKind::ideal_truncation:
            return ideal_truncation(spec.ideal, spec.mode, spec.budget, spec.seed);
    }
    throw structural_error("unknown instance kind");
}

// Truncation sweeps: instantiate the template at each N in [from, to],
// analyze independently (exact intersection number, or an MN cover), and
// collect per-N outcomes. Budget failures are recorded in the series, not
// fatal. Entries are pure functions of the spec, so the fan-out below is
// free to run them on several threads; the merge is ordered by N.
enum class SweepAnalysis { inum, mn };

struct SweepRequest {
    InstanceSpec base;
    std::size_t from = 2, to = 2;
    SweepAnalysis analysis = SweepAnalysis::inum;
    Rational epsilon;
    MNMode mn_mode = MNMode::exact;
    MNOptions mn_options;
    unsigned jobs = 1;
    bool record_timings = true;
};

struct SweepEntry {
    std::size_t N = 0;
    bool ok = false;
    std::string error;   // "", "budget", "value", "structural", "error"
    std::string message;
    std::optional<IntersectionCertificate> inum;
    std::optional<MNReport> mn;
    std::int64_t ms = 0;
};

inline InstanceSpec instantiate_at(InstanceSpec spec, std::size_t N) {
    if (spec.kind == InstanceKind::ideal_truncation) spec.ideal.N = N;
    else spec.n = N;
    if (spec.kind == InstanceKind::ksubsets && spec.k == 0) spec.k = N; // k tracks N
    return spec;
}

inline std::vector<SweepEntry> sweep(const SweepRequest& req) {
    if (req.to < req.from) throw value_error("sweep: empty N range");
    if (req.analysis == SweepAnalysis::mn && (req.epsilon <= 0 || req.epsilon >= 1))
        throw value_error("sweep: epsilon must lie in (0,1)");
    const std::size_t count = req.to - req.from + 1;
    std::vector<SweepEntry> entries(count);

    auto run_one = [&](std::size_t i) {
        SweepEntry& entry = entries[i];
        entry.N = req.from + i;
        auto start = std::chrono::steady_clock::now();
        try {
            Family fam = generate(instantiate_at(req.base, entry.N));
            if (req.analysis == SweepAnalysis::inum)
                entry.inum = intersection_number_exact(fam);
            else
                entry.mn = mn_min_cover(fam, req.epsilon, req.mn_mode, req.mn_options);
            entry.ok = true;
        } catch (const budget_error& e) {
            entry.error = "budget";
            entry.message = e.what();
        } catch (const value_error& e) {
            entry.error = "value";
            entry.message = e.what();
        } catch (const structural_error& e) {
            entry.error = "structural";
            entry.message = e.what();
        } catch (const error& e) {
            entry.error = "error";
            entry.message = e.what();
        }
        if (req.record_timings)
            entry.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
    };

    const unsigned jobs = std::max(1u, req.jobs);
    if (jobs == 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> cursor{0};
        auto worker = [&] {
            for (;;) {
                std::size_t i = cursor.fetch_add(1);
                if (i >= count) return;
                run_one(i);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < std::min<std::size_t>(jobs, count); ++t)
            pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return entries;
}

} // namespace kelleyscope
