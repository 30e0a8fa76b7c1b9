// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Criterion 7 exercises the CLI binary, whose path is argv[1].

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "kelleyscope/generators.hpp"
#include "kelleyscope/io.hpp"
#include "kelleyscope/kelley.hpp"
#include "kelleyscope/lp.hpp"
#include "test_support.hpp"

using namespace kelleyscope;
using Clock = std::chrono::steady_clock;

namespace {

Rational q(long long n, long long d = 1) { return make_rational(Integer(n), Integer(d)); }

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Family make_family(InstanceKind kind, std::size_t n, std::size_t k = 0) {
    InstanceSpec s;
    s.kind = kind;
    s.n = n;
    s.k = k;
    return generate(s);
}

// The sequence-side program solved on its own: min z subject to
// sum_a w_a = 1 and, per atom, sum_{a contains x} w_a <= z.
Rational sequence_side_optimum(const Family& f) {
    const std::size_t m = f.size();
    const std::size_t n = f.ground.size;
    LpInstance lp;
    lp.objective_sense = Objective::minimize;
    lp.objective.assign(m + 1, q(0));
    lp.objective[m] = q(1);
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<Rational> row(m + 1, q(0));
        for (std::size_t a = 0; a < m; ++a)
            if (f[a].atoms.test(x)) row[a] = q(1);
        row[m] = q(-1);
        lp.rows.push_back(std::move(row));
        lp.senses.push_back(Sense::le);
        lp.rhs.push_back(q(0));
    }
    lp.rows.push_back(std::vector<Rational>(m + 1, q(1)));
    lp.rows.back()[m] = q(0);
    lp.senses.push_back(Sense::eq);
    lp.rhs.push_back(q(1));
    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::optimal || !verify(lp, sol))
        throw error("sequence-side LP failed to verify");
    return sol.value;
}

bool criterion1(std::string& note) {
    auto start = Clock::now();
    SplitMix64 rng(100);
    for (int t = 0; t < 200; ++t) {
        Family f = testsupport::random_family(rng, 10, 12);
        IntersectionCertificate cert = intersection_number_exact(f);
        if (!cert.lp_verified) { note = "lp certificate failed"; return false; }
        if (!verify_certificate(cert, f)) { note = "certificate equalities failed"; return false; }
        if (sequence_side_optimum(f) != cert.value) {
            note = "sequence-side minimum disagrees with measure-side maximum";
            return false;
        }
    }
    double dt = seconds_since(start);
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(1);
    ss << "200 families, both LP sides equal, " << dt << "s";
    note = ss.str();
    return dt < 60.0;
}

bool criterion2(std::string& note) {
    for (std::size_t n = 2; n <= 8; ++n) {
        Family f = make_family(InstanceKind::atoms, n);
        IntersectionCertificate cert = intersection_number_exact(f);
        if (cert.value != q(1, static_cast<long long>(n))) {
            note = "I(atoms(" + std::to_string(n) + ")) != 1/n";
            return false;
        }
        if (intersection_number_bruteforce(f, Integer(n)).value != cert.value) {
            note = "brute force at L=n disagrees on atoms(" + std::to_string(n) + ")";
            return false;
        }
    }
    for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{
             {4, 2}, {5, 2}, {5, 3}, {6, 3}}) {
        Family f = make_family(InstanceKind::ksubsets, n, k);
        IntersectionCertificate cert = intersection_number_exact(f);
        if (cert.value != q(static_cast<long long>(k), static_cast<long long>(n))) {
            note = "I(ksubsets) != k/n at (" + std::to_string(n) + "," + std::to_string(k) + ")";
            return false;
        }
        if (intersection_number_bruteforce(f, Integer(n), Integer(1) << 22).value != cert.value) {
            note = "brute force at L=n disagrees on ksubsets(" + std::to_string(n) + "," +
                   std::to_string(k) + ")";
            return false;
        }
    }
    note = "atoms n=2..8 and four k-subset families, brute-force cross-checked";
    return true;
}

bool criterion3(std::string& note) {
    SplitMix64 rng(300);
    int equalities = 0;
    for (int t = 0; t < 50; ++t) {
        Family f = testsupport::random_family(rng, 6, 6);
        IntersectionCertificate cert = intersection_number_exact(f);
        Integer witness_len = cert.witness_sequence.length();
        Integer cap = witness_len < 6 ? witness_len : Integer(6);
        Rational prev(2);
        for (Integer L(1); L <= cap; ++L) {
            BruteForceResult r = intersection_number_bruteforce(f, L, Integer(1) << 22);
            if (r.value < cert.value) { note = "brute force undercut the exact value"; return false; }
            if (r.value > prev) { note = "brute force increased with L"; return false; }
            prev = r.value;
            if (L >= witness_len) {
                if (r.value != cert.value) {
                    note = "no equality at L >= witness length";
                    return false;
                }
                ++equalities;
            }
        }
    }
    note = "50 instances dominate, decrease, and close the gap (" +
           std::to_string(equalities) + " equality checks)";
    return true;
}

bool criterion4(std::string& note) {
    SplitMix64 rng(400);
    // Randomly partitioned covers with LP witnesses.
    for (int t = 0; t < 30; ++t) {
        Family f = testsupport::random_family(rng, 5, 6);
        std::size_t k = 1 + rng.below(3);
        CoverCertificate cover{f, {}, {}, {}, true};
        std::vector<std::vector<std::size_t>> classes(k);
        for (std::size_t i = 0; i < f.size(); ++i) classes[rng.below(k)].push_back(i);
        for (auto& cls : classes) {
            if (cls.empty()) continue;
            std::vector<Element> elems;
            for (std::size_t i : cls) elems.push_back(f[i]);
            IntersectionCertificate cert = intersection_number_exact(Family(f.ground, elems));
            cover.classes.push_back(cls);
            cover.thresholds.push_back(cert.value);
            cover.witnesses.push_back(cert.witness_measure);
        }
        SynthesizedMeasure syn = synthesize_measure_from_cover(cover);
        for (std::size_t j = 0; j < cover.classes.size(); ++j) {
            Rational bound = syn.normalization * q(1, 1ll << (j + 1)) * cover.thresholds[j];
            if (bound != syn.class_bounds[j]) { note = "reported class bound mismatch"; return false; }
            for (std::size_t idx : cover.classes[j])
                if (syn.measure(f[idx]) < bound) {
                    note = "synthesized measure misses its class bound";
                    return false;
                }
        }
    }
    // Covers exhausting B+ must synthesize strictly positive measures.
    for (std::size_t n = 2; n <= 4; ++n) {
        Family f = full_algebra_bplus(n);
        CoverCertificate cover{f, {}, {}, {}, true};
        for (std::size_t x = 0; x < n; ++x) {
            std::vector<std::size_t> cls;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (f[i].atoms.test(x) && f[i].atoms.atoms().front() == x) cls.push_back(i);
            cover.classes.push_back(cls);
            cover.thresholds.push_back(q(1));
            cover.witnesses.push_back(Measure::point_mass(n, x));
        }
        SynthesizedMeasure syn = synthesize_measure_from_cover(cover);
        if (!is_strictly_positive_on_algebra(syn.measure)) {
            note = "exhaustive cover synthesized a non-strictly-positive measure";
            return false;
        }
    }
    // Converse: threshold classes re-verify their intersection numbers.
    for (int t = 0; t < 50; ++t) {
        Family f = testsupport::random_family(rng, 5, 6);
        std::vector<Rational> w(f.ground.size);
        Rational sum(0);
        for (auto& x : w) { x = q(static_cast<long long>(rng.below(20))); sum += x; }
        if (sum == 0) { w[0] = q(1); sum = q(1); }
        for (auto& x : w) x /= sum;
        Measure mu(w);
        std::vector<Rational> grid{q(2, 3), q(1, 3), q(1, 7)};
        CoverCertificate cover = cover_from_measure(mu, f, grid);
        for (std::size_t j = 0; j < cover.classes.size(); ++j) {
            std::vector<Element> elems;
            for (std::size_t i : cover.classes[j]) elems.push_back(f[i]);
            if (intersection_number_exact(Family(f.ground, elems)).value < cover.thresholds[j]) {
                note = "threshold class has intersection number below its threshold";
                return false;
            }
        }
        bool all_caught = true;
        for (const auto& e : f.elements)
            if (mu(e) < grid.back()) all_caught = false;
        if (cover.covers_all != all_caught) { note = "covers_all flag wrong"; return false; }
    }
    note = "50 synthesized covers bounded below, B+ covers strictly positive, classes re-verified";
    return true;
}

bool criterion5(std::string& note) {
    for (std::size_t n = 2; n <= 4; ++n) {
        MNReport rep = mn_min_cover(full_algebra_bplus(n), q(2, 5), MNMode::exact);
        if (!rep.optimal || rep.k != n) {
            note = "exact k != n on B+ of " + std::to_string(n) + " atoms";
            return false;
        }
    }
    SplitMix64 rng(500);
    for (int t = 0; t < 20; ++t) {
        Family f = testsupport::random_family(rng, 5, 6);
        MNReport exact = mn_min_cover(f, q(2, 5), MNMode::exact);
        MNReport greedy = mn_min_cover(f, q(2, 5), MNMode::greedy);
        if (greedy.k < exact.k) { note = "greedy beat exact"; return false; }
        MNReport tight = mn_min_cover(f, q(1, 5), MNMode::exact);
        MNReport loose = mn_min_cover(f, q(4, 5), MNMode::exact);
        if (tight.k < exact.k || exact.k < loose.k) {
            note = "k(eps) is not monotone in eps";
            return false;
        }
    }
    note = "k = n on B+(2..4) at eps = 2/5; greedy >= exact; eps-monotone on 20 instances";
    return true;
}

bool criterion6(std::string& note) {
    SplitMix64 rng(600);
    for (int t = 0; t < 200; ++t) {
        Family f = testsupport::random_family(rng, 8, 8);
        CenteredReport rep = is_centered(f);
        if (!rep.decided()) { note = "centeredness undecided"; return false; }
        bool unit = intersection_number_exact(f).value == 1;
        if (unit != rep.value()) {
            note = "I(A) = 1 and centeredness disagree";
            return false;
        }
    }
    note = "200 families with |A| <= 8, ground <= 8";
    return true;
}

bool criterion7(const std::string& cli, std::string& note) {
    if (cli.empty()) { note = "no CLI path given (argv[1])"; return false; }
    namespace fs = std::filesystem;

    // The seeded suite: every subcommand, timings suppressed.
    auto run_suite = [&](const fs::path& dir, unsigned jobs) {
        std::string d = dir.string() + "/";
        std::string j = " --jobs " + std::to_string(jobs);
        std::vector<std::string> cmds = {
            cli + " --no-timings --seed 11 --out " + d + "rand.json gen --kind random --n 6 --m 6 --p 1/2",
            cli + " --no-timings --seed 12 --out " + d + "mt.json gen --kind measure_threshold --n 6 --delta 1/2 --m 5",
            cli + " --no-timings --out " + d + "a5.json gen --kind atoms --n 5",
            cli + " --no-timings --out " + d + "k52.json gen --kind ksubsets --n 5 --k 2",
            cli + " --no-timings --seed 13 --out " + d + "dens.json gen --kind ideal_truncation --ideal density --d 1/2 --N 5",
            cli + " --no-timings --seed 14 --out " + d + "summ.json gen --kind ideal_truncation --ideal summable --theta 3/2 --N 6 --trunc-mode sampled --family-budget 6",
            cli + " --no-timings --seed 15 --out " + d + "grid.json gen --kind ideal_truncation --ideal grid --c 2 --r 2 --N 3 --trunc-mode sampled --family-budget 5",
            cli + " --no-timings inum " + d + "rand.json --brute 4 --oracle-check",
            cli + " --no-timings inum " + d + "k52.json --oracle-check",
            cli + " --no-timings mn " + d + "rand.json --epsilon 2/5 --mode exact",
            cli + " --no-timings mn " + d + "dens.json --epsilon 1/3 --mode greedy",
            cli + " --no-timings --out " + d + "cover.json cover " + d + "a5.json --measure " + d + "mu.json --grid 1/5,1/10",
            cli + " --no-timings kelley-verify " + d + "a5.json --cover " + d + "cover.json",
            cli + " --no-timings --seed 11 --out " + d + "sweep" + j + " sweep --kind random --m 6 --p 1/2 --from 3 --to 7 --analysis mn --epsilon 2/5 --mode greedy",
            cli + " --no-timings --out " + d + "dsweep" + j + " sweep --kind ideal_truncation --ideal density --d 1/2 --from 4 --to 7",
        };
        write_file((dir / "mu.json").string(),
                   dump_json(measure_to_json(Measure::uniform(5))));
        std::string transcript;
        for (const auto& cmd : cmds) {
            testsupport::RunResult r = testsupport::run(cmd);
            transcript += "== exit " + std::to_string(r.exit_code) + "\n" + r.out;
        }
        for (const char* f : {"rand.json", "mt.json", "a5.json", "k52.json", "dens.json",
                              "summ.json", "grid.json", "cover.json", "sweep.json", "sweep.csv",
                              "dsweep.json", "dsweep.csv"})
            transcript += std::string("-- ") + f + "\n" + read_file((dir / f).string());
        return transcript;
    };

    auto d1 = testsupport::scratch_dir("acc7_run1");
    auto d2 = testsupport::scratch_dir("acc7_run2");
    auto d8 = testsupport::scratch_dir("acc7_jobs8");
    std::string t1 = run_suite(d1, 1);
    std::string t2 = run_suite(d2, 1);
    std::string t8 = run_suite(d8, 8);
    if (t1 != t2) { note = "two identical runs diverged"; return false; }
    if (t1 != t8) { note = "--jobs 1 vs --jobs 8 diverged"; return false; }
    note = "suite of 15 commands byte-identical across runs and --jobs 1 vs 8";
    return true;
}

bool criterion8(std::string& note) {
    auto start = Clock::now();
    SweepRequest req;
    req.base.kind = InstanceKind::ideal_truncation;
    req.base.ideal.name = IdealName::density;
    req.base.ideal.density = q(1, 2);
    req.base.mode = TruncationMode::structured;
    req.from = 4;
    req.to = 8;
    req.record_timings = false;
    std::vector<SweepEntry> series = sweep(req);
    for (const auto& entry : series) {
        if (!entry.ok) { note = "sweep entry failed at N=" + std::to_string(entry.N); return false; }
        long long ceil_half = static_cast<long long>((entry.N + 1) / 2);
        if (entry.inum->value != q(ceil_half, static_cast<long long>(entry.N))) {
            note = "I != ceil(N/2)/N at N=" + std::to_string(entry.N);
            return false;
        }
    }
    double dt = seconds_since(start);
    std::ostringstream ss;
    ss.setf(std::ios::fixed);
    ss.precision(1);
    ss << "N=4..8 all exact, " << dt << "s";
    note = ss.str();
    return dt < 30.0;
}

} // namespace

int main(int argc, char** argv) {
    std::string cli = argc > 1 ? argv[1] : "";
    struct Criterion {
        int id;
        const char* title;
        std::function<bool(std::string&)> fn;
    };
    std::vector<Criterion> criteria = {
        {1, "Kelley duality equality on 200 seeded families", criterion1},
        {2, "closed-form values: 1/n and k/n, brute-force cross-checked", criterion2},
        {3, "oracle dominance and convergence on 50 seeded instances", criterion3},
        {4, "Kelley round trip: synthesis bounds and threshold classes", criterion4},
        {5, "minimal covers: k = n on B+, greedy >= exact, eps-monotone", criterion5},
        {6, "I(A) = 1 iff centered on seeded families", criterion6},
        {8, "density(1/2) sweep reports ceil(N/2)/N for N=4..8", criterion8},
    };

    int failures = 0;
    auto report = [&](int id, const char* title, bool ok, const std::string& note) {
        std::printf("%s  criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, title,
                    note.empty() ? "" : " -- ", note.c_str());
        if (!ok) ++failures;
    };
    for (auto& c : criteria) {
        std::string note;
        bool ok = false;
        try {
            ok = c.fn(note);
        } catch (const std::exception& e) {
            note = std::string("exception: ") + e.what();
        }
        report(c.id, c.title, ok, note);
        if (c.id == 6) { // keep the numbered order: 7 needs the CLI path
            std::string note7;
            bool ok7 = false;
            try {
                ok7 = criterion7(cli, note7);
            } catch (const std::exception& e) {
                note7 = std::string("exception: ") + e.what();
            }
            report(7, "byte-identical reports across runs and job counts", ok7, note7);
        }
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all acceptance criteria passed\n");
    return failures;
}
