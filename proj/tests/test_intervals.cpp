#include "core/intervals.hpp"

#include <cmath>

#include "core/initial_data.hpp"
#include "doctest.h"
#include "interval_oracle.hpp"

using namespace ksipm;
using namespace ksipm::test;

namespace {

std::vector<Interval> classify(const SyntheticTrace& tr, int n0,
                               std::optional<int>* anchor = nullptr) {
    IntervalClassifier cls(ClassifierConfig{n0, {}, {}});
    for (std::size_t i = 0; i < tr.t.size(); ++i) cls.ingest(tr.t[i], tr.y[i]);
    cls.finish();
    if (anchor) *anchor = cls.anchor_exponent();
    return cls.intervals();
}

bool same(const std::vector<Interval>& a, const std::vector<Interval>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].level != b[i].level || a[i].kind != b[i].kind) return false;
        if (std::abs(a[i].t_start - b[i].t_start) > 1e-9) return false;
        if (std::abs(a[i].t_end - b[i].t_end) > 1e-9) return false;
        if (a[i].l2_start != b[i].l2_start || a[i].l2_end != b[i].l2_end) return false;
    }
    return true;
}

// exponent path sampled densely, for hand-built traces
SyntheticTrace exp_path(const std::vector<std::pair<double, double>>& knots, int per_seg = 8) {
    SyntheticTrace tr;
    for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
        const auto [t0, x0] = knots[s];
        const auto [t1, x1] = knots[s + 1];
        const int start = (s == 0) ? 0 : 1;
        for (int k = start; k <= per_seg; ++k) {
            const double frac = static_cast<double>(k) / per_seg;
            tr.t.push_back(t0 + (t1 - t0) * frac);
            tr.y.push_back(std::exp2(x0 + (x1 - x0) * frac));
        }
    }
    return tr;
}

}  // namespace

TEST_CASE("doubling trace yields one good interval per level") {
    const int n0 = 4;
    SyntheticTrace tr = exp_path({{0.0, double(n0)}, {3.0, double(n0 + 3)}}, 24);
    std::optional<int> anchor;
    std::vector<Interval> ivs = classify(tr, n0, &anchor);
    REQUIRE(ivs.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(ivs[i].level == n0 + i);
        CHECK(ivs[i].kind == IntervalKind::good);
        CHECK(ivs[i].t_start == doctest::Approx(double(i)).epsilon(1e-12));
        CHECK(ivs[i].t_end == doctest::Approx(double(i + 1)).epsilon(1e-12));
        CHECK(ivs[i].l2_start == std::ldexp(1.0, n0 + i));
        CHECK(ivs[i].l2_end == std::ldexp(1.0, n0 + i + 1));
    }
    REQUIRE(anchor.has_value());
    CHECK(*anchor == n0 + 3);
    Summary s = summarize(ivs, n0, anchor);
    CHECK(s.intertwining_ok);
    for (const LevelCount& lc : s.per_level) {
        CHECK(lc.goods == 1);
        CHECK(lc.bads == 0);
        CHECK(lc.min_good_length == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("trace below the base level yields nothing") {
    const int n0 = 4;
    SyntheticTrace tr = exp_path({{0.0, n0 - 2.0}, {2.0, n0 - 0.1}, {4.0, n0 - 1.5}});
    CHECK(classify(tr, n0).empty());
}

TEST_CASE("three-phase trace matches the enumerated sequence") {
    const int n0 = 4;
    // rise to n0+2, fall back to n0, rise to n0+3
    SyntheticTrace tr = exp_path(
        {{0.0, double(n0)}, {2.0, double(n0 + 2)}, {4.0, double(n0)}, {7.0, double(n0 + 3)}});
    std::optional<int> anchor;
    std::vector<Interval> ivs = classify(tr, n0, &anchor);

    struct Expect {
        int level;
        IntervalKind kind;
    };
    const std::vector<Expect> want = {
        {n0, IntervalKind::good},     {n0 + 1, IntervalKind::good}, {n0 + 1, IntervalKind::bad},
        {n0, IntervalKind::bad},      {n0, IntervalKind::good},     {n0 + 1, IntervalKind::good},
        {n0 + 2, IntervalKind::good},
    };
    REQUIRE(ivs.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(ivs[i].level == want[i].level);
        CHECK(ivs[i].kind == want[i].kind);
    }

    Summary s = summarize(ivs, n0, anchor);
    CHECK(s.intertwining_ok);
    REQUIRE(s.per_level.size() == 3);
    CHECK(s.per_level[0].goods == 2);
    CHECK(s.per_level[0].bads == 1);
    CHECK(s.per_level[1].goods == 2);
    CHECK(s.per_level[1].bads == 1);
    CHECK(s.per_level[2].goods == 1);
    CHECK(s.per_level[2].bads == 0);

    // the oracle enumerates the same partition
    OracleResult oracle = enumerate_intervals(tr.t, tr.y, n0);
    CHECK(same(ivs, oracle.intervals));
}

TEST_CASE("exact touch counts once the trace strictly departs") {
    const int n0 = 4;
    // grazing touch of 2^{n0+1} then retreat: the touch is a crossing (good),
    // and the retreat later completes a bad interval
    SyntheticTrace tr = exp_path({{0.0, double(n0)}, {1.0, double(n0 + 1)}, {2.0, double(n0)}});
    std::vector<Interval> ivs = classify(tr, n0);
    REQUIRE(ivs.size() == 2);
    CHECK(ivs[0].kind == IntervalKind::good);
    CHECK(ivs[0].level == n0);
    CHECK(ivs[1].kind == IntervalKind::bad);
    CHECK(ivs[1].level == n0);

    // flat run on the level: the crossing lands on the last flat sample
    SyntheticTrace fl;
    fl.t = {0.0, 1.0, 1.5, 2.0, 3.0};
    fl.y = {std::ldexp(1.0, n0), std::ldexp(1.0, n0 + 1), std::ldexp(1.0, n0 + 1),
            std::ldexp(1.0, n0 + 1), std::ldexp(1.0, n0 + 2)};
    IntervalClassifier cls(ClassifierConfig{n0, {}, {}});
    std::vector<Interval> got;
    for (std::size_t i = 0; i < fl.t.size(); ++i)
        for (const Interval& iv : cls.ingest(fl.t[i], fl.y[i])) got.push_back(iv);
    REQUIRE(got.size() == 1);
    CHECK(got[0].t_end == doctest::Approx(2.0));  // last flat sample
    std::vector<Interval> tail = cls.finish();    // the final exact-level touch
    REQUIRE(tail.size() == 1);
    CHECK(tail[0].level == n0 + 1);

    // a trace ending exactly on a level: the interval is pending until
    // finish() declares the trace over, then counts (the level was attained)
    SyntheticTrace ending;
    ending.t = {0.0, 1.0};
    ending.y = {std::ldexp(1.0, n0), std::ldexp(1.0, n0 + 1)};
    IntervalClassifier cend(ClassifierConfig{n0, {}, {}});
    for (std::size_t i = 0; i < ending.t.size(); ++i) cend.ingest(ending.t[i], ending.y[i]);
    CHECK(cend.intervals().empty());
    std::vector<Interval> fin = cend.finish();
    REQUIRE(fin.size() == 1);
    CHECK(fin[0].kind == IntervalKind::good);
    CHECK(fin[0].t_end == doctest::Approx(1.0));
}

TEST_CASE("interval invariants on random traces") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
        const int n0 = 3 + static_cast<int>(seed % 3);
        SyntheticTrace tr = random_trace(seed, n0);
        std::vector<Interval> ivs = classify(tr, n0);
        for (std::size_t i = 0; i < ivs.size(); ++i) {
            const Interval& iv = ivs[i];
            // endpoint values are exact powers of two matching the kind
            if (iv.kind == IntervalKind::good) {
                CHECK(iv.l2_start == std::ldexp(1.0, iv.level));
                CHECK(iv.l2_end == std::ldexp(1.0, iv.level + 1));
            } else {
                CHECK(iv.l2_start == std::ldexp(1.0, iv.level + 1));
                CHECK(iv.l2_end == std::ldexp(1.0, iv.level));
            }
            CHECK(iv.t_end > iv.t_start);
            // excursion bounds: good stays in (2^{N-1}, 2^{N+1}), bad in
            // (2^N, 2^{N+2}), up to interpolation tolerance at the endpoints
            const double lo = (iv.kind == IntervalKind::good) ? std::ldexp(1.0, iv.level - 1)
                                                              : std::ldexp(1.0, iv.level);
            const double hi = (iv.kind == IntervalKind::good) ? std::ldexp(1.0, iv.level + 1)
                                                              : std::ldexp(1.0, iv.level + 2);
            for (std::size_t s = 0; s < tr.t.size(); ++s) {
                if (tr.t[s] <= iv.t_start + 1e-12 || tr.t[s] >= iv.t_end - 1e-12) continue;
                CHECK(tr.y[s] > lo * (1.0 - 1e-9));
                CHECK(tr.y[s] < hi * (1.0 + 1e-9));
            }
            // contiguous tiling while the partition is active (a drop below
            // the floor restarts the anchor search)
            if (i + 1 < ivs.size() && !(ivs[i].kind == IntervalKind::bad &&
                                        ivs[i].level == n0 - 1))
                CHECK(ivs[i + 1].t_start == doctest::Approx(iv.t_end).epsilon(1e-12));
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("classifier agrees with the brute-force enumeration") {
    for (std::uint64_t seed = 1; seed <= 1500; ++seed) {
        const int n0 = 3 + static_cast<int>(seed % 4);
        SyntheticTrace tr = random_trace(seed * 7919, n0, 20, 5, seed % 5 == 0);
        std::optional<int> anchor;
        std::vector<Interval> ivs = classify(tr, n0, &anchor);
        OracleResult oracle = enumerate_intervals(tr.t, tr.y, n0);
        REQUIRE(same(ivs, oracle.intervals));
        CHECK(anchor == oracle.final_anchor_exp);
    }
}

TEST_CASE("escape traces satisfy the exceed-by-one count") {
    int traces_with_bads = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        const int n0 = 4;
        SyntheticTrace tr = random_trace(seed * 31 + 5, n0, 18, 5, true);
        std::optional<int> anchor;
        std::vector<Interval> ivs = classify(tr, n0, &anchor);
        if (!anchor) continue;
        Summary s = summarize(ivs, n0, anchor);
        CHECK(s.intertwining_ok);
        // direct recount of the checked levels
        for (int lvl = s.checked_from; lvl <= s.checked_to; ++lvl) {
            int goods = 0, bads = 0;
            for (const Interval& iv : ivs)
                if (iv.level == lvl) (iv.kind == IntervalKind::good ? goods : bads)++;
            CHECK(goods == bads + 1);
            if (bads > 0) ++traces_with_bads;
        }
    }
    CHECK(traces_with_bads > 30);  // the ensemble genuinely exercises bad intervals
}

TEST_CASE("budget ledger") {
    ClassifierConfig cfg{4, 0.5, 2.0};
    CHECK(budget_ledger({}, 1.0, cfg, 4.0 * kPi).cumulative_drop == 0.0);

    // K good intervals at one level: -K c1 g / N
    std::vector<Interval> goods(3, Interval{6, IntervalKind::good, 0, 1, 64, 128});
    BudgetLedger b = budget_ledger(goods, 2.0, cfg, 4.0 * kPi);
    CHECK(b.cumulative_drop == doctest::Approx(-3.0 * 0.5 * 2.0 / 6.0).epsilon(1e-14));

    // mixed list against an independent sum
    std::vector<Interval> mixed = {
        {4, IntervalKind::good, 0, 1, 16, 32},  {5, IntervalKind::good, 1, 2, 32, 64},
        {4, IntervalKind::bad, 2, 3, 32, 16},   {6, IntervalKind::good, 3, 4, 64, 128},
        {5, IntervalKind::bad, 4, 5, 64, 32},
    };
    double expect = 0.0;
    for (const Interval& iv : mixed)
        expect += iv.kind == IntervalKind::good ? -0.5 * 1.5 / iv.level
                                                : 2.0 * std::exp2(-iv.level / 3.0);
    BudgetLedger bm = budget_ledger(mixed, 1.5, cfg, 4.0 * kPi);
    CHECK(bm.cumulative_drop == doctest::Approx(expect).epsilon(1e-14));
    CHECK(bm.cap == doctest::Approx(kPi * 4.0 * kPi));

    ClassifierConfig no_coeffs{4, {}, {}};
    CHECK_THROWS_AS(budget_ledger(mixed, 1.0, no_coeffs, 1.0), std::invalid_argument);
}

TEST_CASE("classifier input validation") {
    CHECK_THROWS_AS(IntervalClassifier(ClassifierConfig{0, {}, {}}), std::invalid_argument);
    IntervalClassifier cls(ClassifierConfig{4, {}, {}});
    cls.ingest(0.0, 1.0);
    CHECK_THROWS_AS(cls.ingest(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(cls.ingest(1.0, std::nan("")), std::invalid_argument);
}
