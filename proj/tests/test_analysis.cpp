#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "oseba/analysis.hpp"

namespace oseba {
namespace {

// Dataset with keys 0..n-1 whose temperature follows `values`.
Dataset series(const std::vector<double>& values, std::size_t capacity = 4) {
    std::vector<Record> recs;
    for (std::size_t i = 0; i < values.size(); ++i) recs.push_back({static_cast<Key>(i), values[i], 50, 5, 90});
    return Dataset::from_sorted(recs, capacity);
}

std::vector<double> iota_values(int from, int to) {
    std::vector<double> v;
    for (int i = from; i <= to; ++i) v.push_back(i);
    return v;
}

// --- moving average --------------------------------------------------------

TEST(MovingAverage, TenDayWindowOverOneToTen) {
    const auto ds = series(iota_values(1, 10));
    const auto ma = moving_average(select_all(ds), 10, Field::temperature);
    ASSERT_EQ(ma.size(), 1u);
    EXPECT_DOUBLE_EQ(ma[0].value, 5.5);
    EXPECT_EQ(ma[0].key, 9);
}

TEST(MovingAverage, EleventhDaySlidesTheWindow) {
    const auto ds = series(iota_values(1, 11));
    const auto ma = moving_average(select_all(ds), 10, Field::temperature);
    ASSERT_EQ(ma.size(), 2u);
    EXPECT_DOUBLE_EQ(ma[0].value, 5.5);
    EXPECT_DOUBLE_EQ(ma[1].value, 6.5);
    EXPECT_EQ(ma[1].key, 10);
}

TEST(MovingAverage, ConstantSeries) {
    const auto ds = series(std::vector<double>(50, 17.25));
    for (std::size_t w : {1u, 3u, 7u, 50u}) {
        const auto ma = moving_average(select_all(ds), w, Field::temperature);
        EXPECT_EQ(ma.size(), 50 - w + 1);
        for (const auto& p : ma) EXPECT_DOUBLE_EQ(p.value, 17.25);
    }
}

TEST(MovingAverage, LinearRampKeepsSlope) {
    std::vector<double> v;
    for (int i = 0; i < 500; ++i) v.push_back(0.5 * i - 3);
    const auto ds = series(v, 37);
    const auto ma = moving_average(select_all(ds), 9, Field::temperature);
    ASSERT_EQ(ma.size(), 492u);
    for (std::size_t i = 1; i < ma.size(); ++i) EXPECT_NEAR(ma[i].value - ma[i - 1].value, 0.5, 1e-9);
    EXPECT_NEAR(ma[0].value, 0.5 * 4 - 3, 1e-12);
}

TEST(MovingAverage, TooFewRecords) {
    const auto ds = series(iota_values(1, 5));
    try {
        moving_average(select_all(ds), 6, Field::temperature);
        FAIL();
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find('6'), std::string::npos);
        EXPECT_NE(msg.find('5'), std::string::npos);
    }
    EXPECT_THROW(moving_average(select_all(ds), 0, Field::temperature), ValidationError);
}

TEST(MovingAverage, PrunedAndBaselinePathsAgree) {
    const auto ds = generate_synthetic(3000, 0, 2, 100, 3);
    const auto idx = build_index(ds, IndexKind::cias);
    const auto sel = select_period(ds, idx, 401, 4999);
    const auto m = full_scan_filter(ds, 401, 4999);
    EXPECT_EQ(moving_average(sel, 25, Field::wind_speed), moving_average(m, 25, Field::wind_speed));
}

// --- distance ---------------------------------------------------------------

TEST(Distance, IdentityIsZero) {
    const auto ds = generate_synthetic(200, 0, 1, 16, 4);
    const auto s = select_all(ds);
    const auto d = distance_comparison(s, s, Field::temperature);
    EXPECT_EQ(d.euclidean, 0.0);
    EXPECT_EQ(d.mean_abs, 0.0);
    EXPECT_EQ(d.n, 200u);
    EXPECT_FALSE(d.truncated);
}

TEST(Distance, SmallArithmetic) {
    const auto a = series({1, 2, 3});
    const auto b = series({1, 2, 7});
    const auto d = distance_comparison(select_all(a), select_all(b), Field::temperature);
    EXPECT_EQ(d.pointwise, (std::vector<double>{0, 0, 4}));
    EXPECT_DOUBLE_EQ(d.euclidean, 4.0);
    EXPECT_DOUBLE_EQ(d.mean_abs, 4.0 / 3.0);
}

TEST(Distance, SymmetricAndBoundedOnRandomSelections) {
    const auto ds = generate_synthetic(4000, 0, 1, 128, 8);
    const auto idx = build_index(ds, IndexKind::table);
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<Key> kd(0, 3999);
    for (int q = 0; q < 100; ++q) {
        Key a0 = kd(rng), a1 = kd(rng), b0 = kd(rng), b1 = kd(rng);
        if (a0 > a1) std::swap(a0, a1);
        if (b0 > b1) std::swap(b0, b1);
        const auto sa = select_period(ds, idx, a0, a1);
        const auto sb = select_period(ds, idx, b0, b1);
        const auto ab = distance_comparison(sa, sb, Field::humidity);
        const auto ba = distance_comparison(sb, sa, Field::humidity);
        EXPECT_EQ(ab, ba);
        EXPECT_EQ(ab.truncated, (a1 - a0) != (b1 - b0));
        EXPECT_EQ(ab.n, static_cast<std::size_t>(std::min(a1 - a0, b1 - b0) + 1));
        const double max_pw = *std::max_element(ab.pointwise.begin(), ab.pointwise.end());
        EXPECT_LE(ab.euclidean, std::sqrt(static_cast<double>(ab.n)) * max_pw * (1 + 1e-12));
        EXPECT_GE(ab.mean_abs, 0.0);
    }
}

TEST(Distance, EmptySelectionIsAnError) {
    const auto ds = generate_synthetic(20, 0, 1, 4, 4);
    const RangeIndex idx = build_table(ds);
    EXPECT_THROW(distance_comparison(select_period(ds, idx, 100, 200), select_all(ds), Field::temperature),
                 ValidationError);
}

// --- descriptive statistics -------------------------------------------------

TEST(Stats, ConstantSeries) {
    const auto s = descriptive_stats(select_all(series({2, 2, 2})), Field::temperature);
    EXPECT_EQ(s.count, 3u);
    EXPECT_EQ(s.max, 2.0);
    EXPECT_EQ(s.mean, 2.0);
    EXPECT_EQ(s.stddev, 0.0);
}

TEST(Stats, OneToFour) {
    const auto s = descriptive_stats(select_all(series({1, 2, 3, 4})), Field::temperature);
    EXPECT_EQ(s.max, 4.0);
    EXPECT_DOUBLE_EQ(s.mean, 2.5);
    EXPECT_DOUBLE_EQ(s.stddev, std::sqrt(1.25));
}

TEST(Stats, MatchesTwoPassOracleOverBaselineOutput) {
    const auto ds = generate_synthetic(20000, 1000, 5, 700, 12);
    const auto idx = build_index(ds, IndexKind::cias);
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<Key> kd(ds.key_lo(), ds.key_hi() - 1);
    for (int q = 0; q < 100; ++q) {
        Key a = kd(rng), b = kd(rng);
        if (a > b) std::swap(a, b);
        for (Field f : kAllFields) {
            const auto sel = select_period(ds, idx, a, b);
            const auto m = full_scan_filter(ds, a, b);
            if (m.kept_records.empty()) {
                EXPECT_THROW(descriptive_stats(sel, f), ValidationError);
                continue;
            }
            std::vector<double> xs;
            for (const auto& r : m.kept_records) xs.push_back(field_value(r, f));
            const auto want = oracle::two_pass(xs);
            const auto got = descriptive_stats(sel, f);
            EXPECT_EQ(got.count, want.count);
            EXPECT_EQ(got.max, want.max);
            EXPECT_TRUE(oracle::rel_close(got.mean, want.mean, 1e-9)) << got.mean << " vs " << want.mean;
            EXPECT_TRUE(oracle::rel_close(got.stddev, want.stddev, 1e-9)) << got.stddev << " vs " << want.stddev;
            EXPECT_LE(want.min, got.mean);
            EXPECT_LE(got.mean, got.max);
            EXPECT_EQ(got.stddev == 0.0, want.min == want.max);
            EXPECT_EQ(got, descriptive_stats(m, f));
        }
    }
}

TEST(Stats, EmptySelection) {
    const auto ds = generate_synthetic(20, 0, 1, 4, 4);
    const RangeIndex idx = build_table(ds);
    EXPECT_THROW(descriptive_stats(select_period(ds, idx, -10, -1), Field::temperature), ValidationError);
}

TEST(Stats, LargeOffsetStaysAccurate) {
    std::vector<double> v;
    for (int i = 0; i < 10000; ++i) v.push_back(1e9 + (i % 7));
    const auto got = descriptive_stats(select_all(series(v, 512)), Field::temperature);
    const auto want = oracle::two_pass(v);
    EXPECT_TRUE(oracle::rel_close(got.stddev, want.stddev, 1e-9));
}

// --- split ------------------------------------------------------------------

std::vector<KeyRange> periods_of(int n, Key width = 100) {
    std::vector<KeyRange> p;
    for (int i = 0; i < n; ++i) p.push_back({i * width, i * width + width - 1});
    return p;
}

TEST(Split, SixTwoTwo) {
    const auto ds = generate_synthetic(1000, 0, 1, 64, 1);
    const RangeIndex idx = build_table(ds);
    const auto r = split_tvt(ds, idx, periods_of(10), {0.6, 0.2, 0.2}, 7);
    EXPECT_EQ(r.assignment.training.size(), 6u);
    EXPECT_EQ(r.assignment.tests.size(), 2u);
    EXPECT_EQ(r.assignment.validation.size(), 2u);
    EXPECT_EQ(r.training.size(), 6u);
    EXPECT_EQ(r.assignment.seed, 7u);
}

TEST(Split, RemainderGoesToValidation) {
    // floor(0.5*7) = 3, floor(0.25*7) = 1, 7 - 3 - 1 = 3.
    EXPECT_EQ(split_sizes(7, {0.5, 0.25, 0.25}), (std::array<std::size_t, 3>{3, 1, 3}));
    const auto ds = generate_synthetic(700, 0, 1, 64, 1);
    const RangeIndex idx = build_table(ds);
    const auto r = split_tvt(ds, idx, periods_of(7), {0.5, 0.25, 0.25}, 3);
    EXPECT_EQ(r.assignment.training.size(), 3u);
    EXPECT_EQ(r.assignment.tests.size(), 1u);
    EXPECT_EQ(r.assignment.validation.size(), 3u);
}

TEST(Split, FloorSlackForInexactProducts) { EXPECT_EQ(split_sizes(10, {0.7, 0.1, 0.2})[0], 7u); }

TEST(Split, DeterministicDisjointExhaustive) {
    const auto ds = generate_synthetic(5000, 0, 1, 64, 1);
    const RangeIndex idx = compress(build_table(ds));
    const auto periods = periods_of(25, 200);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto a = split_tvt(ds, idx, periods, {0.6, 0.2, 0.2}, seed);
        const auto b = split_tvt(ds, idx, periods, {0.6, 0.2, 0.2}, seed);
        EXPECT_EQ(a.assignment, b.assignment);
        std::vector<KeyRange> all;
        for (const auto* g : {&a.assignment.training, &a.assignment.tests, &a.assignment.validation}) {
            all.insert(all.end(), g->begin(), g->end());
        }
        std::ranges::sort(all, {}, &KeyRange::lo);
        EXPECT_EQ(all, periods);
        for (std::size_t i = 0; i < a.training.size(); ++i) {
            EXPECT_EQ(a.training[i].range, a.assignment.training[i]);
            EXPECT_EQ(scan_selection(a.training[i], CountReducer{}).count, 200u);
        }
    }
    EXPECT_NE(split_tvt(ds, idx, periods, {0.6, 0.2, 0.2}, 1).assignment,
              split_tvt(ds, idx, periods, {0.6, 0.2, 0.2}, 2).assignment);
}

TEST(Split, Errors) {
    const auto ds = generate_synthetic(1000, 0, 1, 64, 1);
    const RangeIndex idx = build_table(ds);
    const std::vector<KeyRange> overlapping{{0, 10}, {10, 20}};
    EXPECT_THROW(split_tvt(ds, idx, overlapping, {0.6, 0.2, 0.2}, 0), ValidationError);
    EXPECT_THROW(split_tvt(ds, idx, periods_of(5), {0.6, 0.2, 0.3}, 0), ValidationError);
    EXPECT_THROW(split_tvt(ds, idx, periods_of(5), {1.0, 0.0, 0.0}, 0), ValidationError);
    EXPECT_THROW(split_tvt(ds, idx, {}, {0.6, 0.2, 0.2}, 0), ValidationError);
}

// --- event analysis ---------------------------------------------------------

TEST(Event, IdenticalDistributionsHaveZeroDistance) {
    const auto ds = series(std::vector<double>(100, 3.0), 8);
    const RangeIndex idx = build_table(ds);
    const auto r = event_analysis(ds, idx, 50, 20, 20, Field::temperature, 10);
    EXPECT_EQ(r.l1_distance, 0.0);
    EXPECT_EQ(r.before_hist[0], 1.0);
    EXPECT_EQ(r.before, (KeyRange{30, 49}));
    EXPECT_EQ(r.after, (KeyRange{50, 69}));
    EXPECT_EQ(r.before_count, 20u);
}

TEST(Event, DisjointSupportHasDistanceTwo) {
    std::vector<double> v(40, 0.0);
    for (int i = 20; i < 40; ++i) v[i] = 10.0;
    const auto ds = series(v, 8);
    const RangeIndex idx = compress(build_table(ds));
    const auto r = event_analysis(ds, idx, 20, 20, 20, Field::temperature, 4);
    EXPECT_DOUBLE_EQ(r.l1_distance, 2.0);
    EXPECT_EQ(r.before_hist[0], 1.0);
    EXPECT_EQ(r.after_hist[3], 1.0);
}

TEST(Event, MatchesDirectHistogramOverBaselineOutput) {
    const auto ds = generate_synthetic(10000, 0, 1, 256, 17);
    const auto table = build_index(ds, IndexKind::table);
    const auto cias = build_index(ds, IndexKind::cias);
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<Key> ek(50, 9950);
    std::uniform_int_distribution<Key> span(1, 2000);
    for (int q = 0; q < 50; ++q) {
        const Key e = ek(rng);
        const Key before = span(rng), after = span(rng);
        const std::size_t bins = 1 + static_cast<std::size_t>(q % 16);
        const auto got = event_analysis(ds, table, e, before, after, Field::wind_direction, bins);
        EXPECT_EQ(got, event_analysis(ds, cias, e, before, after, Field::wind_direction, bins));
        std::vector<double> vb, va;
        for (const auto& r : full_scan_filter(ds, e - before, e - 1).kept_records) vb.push_back(r.wind_direction);
        for (const auto& r : full_scan_filter(ds, e, e + after - 1).kept_records) va.push_back(r.wind_direction);
        EXPECT_NEAR(got.l1_distance, oracle::histogram_l1(vb, va, bins), 1e-12);
        EXPECT_GE(got.l1_distance, 0.0);
        EXPECT_LE(got.l1_distance, 2.0 + 1e-12);
    }
}

TEST(Event, Errors) {
    const auto ds = generate_synthetic(100, 0, 1, 8, 1);
    const RangeIndex idx = build_table(ds);
    EXPECT_THROW(event_analysis(ds, idx, 0, 10, 10, Field::temperature, 4), ValidationError);   // nothing before
    EXPECT_THROW(event_analysis(ds, idx, 100, 10, 10, Field::temperature, 4), ValidationError); // nothing after
    EXPECT_THROW(event_analysis(ds, idx, 50, 0, 10, Field::temperature, 4), ValidationError);
    EXPECT_THROW(event_analysis(ds, idx, 50, 10, 10, Field::temperature, 0), ValidationError);
}

// --- index interchangeability ----------------------------------------------

TEST(Interchangeability, TableAndCiasGiveIdenticalResults) {
    const auto ds = generate_synthetic(6000, -3000, 1, 250, 23);
    const auto t = build_index(ds, IndexKind::table);
    const auto c = build_index(ds, IndexKind::cias);
    std::mt19937_64 rng(44);
    std::uniform_int_distribution<Key> kd(-3500, 3500);
    for (int q = 0; q < 100; ++q) {
        Key a = kd(rng), b = kd(rng);
        if (a > b) std::swap(a, b);
        const auto st = select_period(ds, t, a, b);
        const auto sc = select_period(ds, c, a, b);
        EXPECT_EQ(st.partitions, sc.partitions);
        if (scan_selection(st, CountReducer{}).count > 0) {
            EXPECT_EQ(descriptive_stats(st, Field::temperature), descriptive_stats(sc, Field::temperature));
        }
    }
}

}  // namespace
}  // namespace oseba
