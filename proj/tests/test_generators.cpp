#include <catch2/catch_amalgamated.hpp>

#include "kelleyscope/generators.hpp"
#include "kelleyscope/intersection.hpp"
#include "kelleyscope/rng.hpp"

using namespace kelleyscope;

namespace {

Rational q(long long n, long long d = 1) { return make_rational(Integer(n), Integer(d)); }

std::vector<std::vector<std::size_t>> atom_lists(const Family& f) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& e : f.elements) out.push_back(e.atoms.atoms());
    return out;
}

InstanceSpec spec_of(InstanceKind kind) {
    InstanceSpec s;
    s.kind = kind;
    return s;
}

} // namespace

TEST_CASE("the seeded stream is canonical SplitMix64") {
    SplitMix64 rng(0);
    CHECK(rng.next() == 0xe220a8397b1dcdafull);
    CHECK(rng.next() == 0x6e789e6aa1b965f4ull);
    CHECK(rng.next() == 0x06c45d188009454full);
    CHECK(rng.next() == 0xf88bb8a8724c81ecull);

    SplitMix64 r42(42);
    CHECK(r42.next() == 0xbdd732262feb6e95ull);
    CHECK(r42.next() == 0x28efe333b266f103ull);
}

TEST_CASE("stream helpers stay in range and honor exact probabilities") {
    SplitMix64 rng(5);
    for (int i = 0; i < 200; ++i) CHECK(rng.below(7) < 7);
    CHECK(rng.bernoulli(Rational(1)));
    CHECK_FALSE(rng.bernoulli(Rational(0)));
    for (int i = 0; i < 50; ++i) {
        Integer v = rng.below_big(Integer("100000000000000000000000"));
        CHECK(v >= 0);
        CHECK(v < Integer("100000000000000000000000"));
    }
    auto pick = rng.choose(10, 4);
    CHECK(pick.size() == 4);
    CHECK(std::is_sorted(pick.begin(), pick.end()));
    CHECK_THROWS_AS(rng.choose(3, 4), value_error);
    CHECK_THROWS_AS(rng.bernoulli(q(3, 2)), value_error);
}

TEST_CASE("structured kinds enumerate exactly") {
    InstanceSpec a = spec_of(InstanceKind::atoms);
    a.n = 3;
    CHECK(atom_lists(generate(a)) == std::vector<std::vector<std::size_t>>{{0}, {1}, {2}});

    InstanceSpec ks = spec_of(InstanceKind::ksubsets);
    ks.n = 3;
    ks.k = 2;
    CHECK(atom_lists(generate(ks)) == std::vector<std::vector<std::size_t>>{{0, 1}, {0, 2}, {1, 2}});

    InstanceSpec ks2 = spec_of(InstanceKind::ksubsets);
    ks2.n = 6;
    ks2.k = 3;
    CHECK(generate(ks2).size() == 20); // C(6,3)

    InstanceSpec iv = spec_of(InstanceKind::intervals);
    iv.n = 4;
    Family intervals = generate(iv);
    CHECK(intervals.size() == 4 * 5 / 2);
    CHECK(intervals[0] == Element::of(4, {0}));
    CHECK(intervals[3] == Element::of(4, {0, 1, 2, 3}));

    CHECK_THROWS_AS(generate(spec_of(InstanceKind::atoms)), value_error);
    InstanceSpec bad = spec_of(InstanceKind::ksubsets);
    bad.n = 2;
    bad.k = 3;
    CHECK_THROWS_AS(generate(bad), value_error);
}

TEST_CASE("random families are pinned by seed") {
    InstanceSpec s = spec_of(InstanceKind::random);
    s.n = 6;
    s.m = 5;
    s.p = q(1, 2);
    s.seed = 42;
    Family f = generate(s);
    // golden, pinned at first build
    CHECK(atom_lists(f) == std::vector<std::vector<std::size_t>>{
                               {1, 2, 3, 4}, {0, 2, 4, 5}, {3, 4, 5}, {0, 3}, {0, 1}});
    Family again = generate(s);
    CHECK(atom_lists(again) == atom_lists(f));

    s.p = q(0);
    CHECK_THROWS_AS(generate(s), value_error);
    s.p = q(3, 2);
    CHECK_THROWS_AS(generate(s), value_error);
}

TEST_CASE("measure-threshold families respect the size cutoff") {
    InstanceSpec s = spec_of(InstanceKind::measure_threshold);
    s.n = 6;
    s.m = 3;
    s.delta = q(1, 2);
    s.seed = 7;
    Family f = generate(s);
    CHECK(atom_lists(f) == std::vector<std::vector<std::size_t>>{
                               {0, 2, 4, 5}, {1, 3, 4}, {0, 1, 2, 4}});
    for (const auto& e : f.elements) CHECK(e.atoms.count() * 2 >= 6);

    SplitMix64 seeds(99);
    for (int t = 0; t < 10; ++t) {
        s.seed = seeds.next();
        s.delta = q(2, 3);
        for (const auto& e : generate(s).elements)
            CHECK(e.atoms.count() >= 4); // ceil(2/3 * 6)
    }
    s.delta = q(0);
    CHECK_THROWS_AS(generate(s), value_error);
}

TEST_CASE("density truncation: exhaustive, interval fallback, sampling") {
    IdealSpec d;
    d.name = IdealName::density;
    d.density = q(1, 2);
    d.N = 4;

    Family all = ideal_truncation(d, TruncationMode::structured, 6, 0);
    CHECK(atom_lists(all) == std::vector<std::vector<std::size_t>>{
                                 {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});

    // budget 0: intervals only
    Family iv = ideal_truncation(d, TruncationMode::structured, 0, 0);
    CHECK(atom_lists(iv) == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 2}, {2, 3}});

    Family smp = ideal_truncation(d, TruncationMode::sampled, 12, 3);
    CHECK(smp.size() == 12);
    for (const auto& e : smp.elements) CHECK(ideal_positive(d, e));

    IdealSpec bad = d;
    bad.density = q(0);
    CHECK_THROWS_AS(ideal_truncation(bad, TruncationMode::structured, 6, 0), value_error);
    bad.density = q(1);
    CHECK_THROWS_AS(ideal_truncation(bad, TruncationMode::structured, 6, 0), value_error);
}

TEST_CASE("summable truncation: minimal intervals and the weight bound") {
    IdealSpec s;
    s.name = IdealName::summable;
    s.theta = q(1);
    s.N = 4;
    Family f = ideal_truncation(s, TruncationMode::structured, 40, 0);
    CHECK(atom_lists(f) == std::vector<std::vector<std::size_t>>{{0}, {1, 2, 3}});

    // theta above the full harmonic weight 25/12 of [0,4)
    IdealSpec over = s;
    over.theta = q(25, 12) + q(1);
    try {
        ideal_truncation(over, TruncationMode::structured, 40, 0);
        FAIL("expected value_error");
    } catch (const value_error& e) {
        CHECK(std::string(e.what()).find("25/12") != std::string::npos);
    }

    Family smp = ideal_truncation(s, TruncationMode::sampled, 9, 11);
    CHECK(smp.size() == 9);
    for (const auto& e : smp.elements) CHECK(harmonic_weight(e) >= s.theta);
}

TEST_CASE("grid truncation: full columns and sampled cells") {
    IdealSpec g;
    g.name = IdealName::grid;
    g.grid_cols = 1;
    g.grid_rows = 1;
    g.N = 2;
    Family f = ideal_truncation(g, TruncationMode::structured, 40, 0);
    CHECK(atom_lists(f) == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});

    IdealSpec g2;
    g2.name = IdealName::grid;
    g2.grid_cols = 2;
    g2.grid_rows = 2;
    g2.N = 4;
    Family smp = ideal_truncation(g2, TruncationMode::sampled, 7, 5);
    CHECK(smp.size() == 7);
    CHECK(smp.ground.size == 16);
    for (const auto& e : smp.elements) CHECK(ideal_positive(g2, e));

    IdealSpec bad = g2;
    bad.grid_rows = 5; // more cells than a column holds
    CHECK_THROWS_AS(ideal_truncation(bad, TruncationMode::structured, 7, 5), value_error);
}

TEST_CASE("sweeps report per-N certificates in order") {
    SweepRequest req;
    req.base = spec_of(InstanceKind::atoms);
    req.from = 2;
    req.to = 5;
    req.record_timings = false;
    std::vector<SweepEntry> series = sweep(req);
    REQUIRE(series.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(series[i].N == i + 2);
        REQUIRE(series[i].ok);
        CHECK(series[i].inum->value == q(1, static_cast<long long>(i + 2)));
    }

    SweepRequest density;
    density.base = spec_of(InstanceKind::ideal_truncation);
    density.base.ideal.name = IdealName::density;
    density.base.ideal.density = q(1, 2);
    density.from = 4;
    density.to = 6;
    density.record_timings = false;
    std::vector<SweepEntry> ds = sweep(density);
    REQUIRE(ds.size() == 3);
    CHECK(ds[0].inum->value == q(1, 2));
    CHECK(ds[1].inum->value == q(3, 5));
    CHECK(ds[2].inum->value == q(1, 2));
}

TEST_CASE("mn sweeps over the one-element family are constant") {
    SweepRequest req;
    req.base = spec_of(InstanceKind::ksubsets);
    req.base.k = 0; // k tracks N: each instance is the single full set
    req.analysis = SweepAnalysis::mn;
    req.epsilon = q(1, 2);
    req.from = 2;
    req.to = 5;
    req.record_timings = false;
    std::vector<SweepEntry> series = sweep(req);
    REQUIRE(series.size() == 4);
    for (const auto& entry : series) {
        REQUIRE(entry.ok);
        CHECK(entry.mn->k == 1);
        CHECK(entry.mn->optimal);
    }
}

TEST_CASE("a sweep survives one unsatisfiable N") {
    SweepRequest req;
    req.base = spec_of(InstanceKind::ideal_truncation);
    req.base.ideal.name = IdealName::summable;
    req.base.ideal.theta = q(2); // H_3 = 11/6 < 2 <= H_4
    req.from = 3;
    req.to = 5;
    req.record_timings = false;
    std::vector<SweepEntry> series = sweep(req);
    REQUIRE(series.size() == 3);
    CHECK_FALSE(series[0].ok);
    CHECK(series[0].error == "value");
    CHECK(series[1].ok);
    CHECK(series[2].ok);
}

TEST_CASE("sweep results are independent of the job count") {
    SweepRequest req;
    req.base = spec_of(InstanceKind::ksubsets);
    req.base.k = 2;
    req.from = 3;
    req.to = 7;
    req.record_timings = false;
    req.jobs = 1;
    std::vector<SweepEntry> one = sweep(req);
    req.jobs = 8;
    std::vector<SweepEntry> eight = sweep(req);
    REQUIRE(one.size() == eight.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].ok == eight[i].ok);
        CHECK(one[i].inum->value == eight[i].inum->value);
        CHECK(one[i].inum->witness_measure.weights == eight[i].inum->witness_measure.weights);
    }
}
