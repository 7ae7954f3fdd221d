#ifndef OSEBA_ANALYSIS_HPP_
#define OSEBA_ANALYSIS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "oseba/dataset.hpp"
#include "oseba/random.hpp"
#include "oseba/range_index.hpp"
#include "oseba/selection.hpp"

namespace oseba {

// Every analysis below accepts either a Selection (pruned path) or a span of
// already materialized records (baseline path) and visits records in key
// order in both cases, so the two paths fold identical sequences.

template <class Fn>
void for_each_record_in(const Selection& s, Fn&& fn, ScanStats* stats = nullptr) {
    visit_selection(s, fn, stats);
}

template <class Fn>
void for_each_record_in(std::span<const Record> records, Fn&& fn, ScanStats* = nullptr) {
    for (const Record& r : records) fn(r);
}

template <class Fn>
void for_each_record_in(const MaterializedDerived& m, Fn&& fn, ScanStats* stats = nullptr) {
    for_each_record_in(m.records(), fn, stats);
}

// ---------------------------------------------------------------------------
// Descriptive statistics
// ---------------------------------------------------------------------------

struct StatsSummary {
    std::uint64_t count = 0;
    double max = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // population form

    friend bool operator==(const StatsSummary&, const StatsSummary&) = default;
};

// Single-pass mean/variance: Welford's running update for add(), Chan et al.'s
// pairwise combination for merge().
class StatsAccumulator {
public:
    explicit StatsAccumulator(Field field = Field::temperature) : field_(field) {}

    void add(const Record& r) noexcept { add_value(field_value(r, field_)); }

    void add_value(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
        max_ = std::max(max_, x);
        min_ = std::min(min_, x);
    }

    void merge(const StatsAccumulator& o) noexcept {
        if (o.count_ == 0) return;
        if (count_ == 0) {
            *this = o;
            return;
        }
        const double n_a = static_cast<double>(count_);
        const double n_b = static_cast<double>(o.count_);
        const double n = n_a + n_b;
        const double delta = o.mean_ - mean_;
        mean_ += delta * n_b / n;
        m2_ += o.m2_ + delta * delta * n_a * n_b / n;
        count_ += o.count_;
        max_ = std::max(max_, o.max_);
        min_ = std::min(min_, o.min_);
    }

    std::uint64_t count() const noexcept { return count_; }
    double min() const noexcept { return min_; }

    StatsSummary summary() const {
        if (count_ == 0) throw ValidationError("statistics of an empty selection are undefined");
        const double var = std::max(0.0, m2_ / static_cast<double>(count_));
        return StatsSummary{count_, max_, mean_, std::sqrt(var)};
    }

private:
    Field field_;
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double max_ = -std::numeric_limits<double>::infinity();
    double min_ = std::numeric_limits<double>::infinity();
};

inline StatsSummary descriptive_stats(const Selection& s, Field field, ScanStats* stats = nullptr,
                                      ScanOptions options = {}) {
    return scan_selection(s, StatsAccumulator(field), stats, options).summary();
}

inline StatsSummary descriptive_stats(std::span<const Record> records, Field field) {
    StatsAccumulator acc(field);
    for (const Record& r : records) acc.add(r);
    return acc.summary();
}

inline StatsSummary descriptive_stats(const MaterializedDerived& m, Field field) {
    return descriptive_stats(m.records(), field);
}

// ---------------------------------------------------------------------------
// Moving average
// ---------------------------------------------------------------------------

struct AveragePoint {
    Key key = 0;
    double value = 0.0;

    friend bool operator==(const AveragePoint&, const AveragePoint&) = default;
};

// Trailing mean over `window` consecutive records; each point is stamped
// with the key of the newest record in its window.
template <class Source>
std::vector<AveragePoint> moving_average(const Source& source, std::size_t window, Field field) {
    if (window < 1) throw ValidationError("moving-average window must be >= 1");
    std::vector<Key> keys;
    std::vector<double> values;
    for_each_record_in(source, [&](const Record& r) {
        keys.push_back(r.key);
        values.push_back(field_value(r, field));
    });
    const std::size_t n = values.size();
    if (n < window) {
        throw ValidationError("moving average needs at least " + std::to_string(window) + " records, selection has " +
                              std::to_string(n));
    }

    std::vector<AveragePoint> out;
    out.reserve(n - window + 1);
    const double w = static_cast<double>(window);
    double sum = 0.0;
    for (std::size_t i = 0; i < n - window + 1; ++i) {
        // Sliding update, re-summed from scratch once per window length to
        // keep rounding drift bounded.
        if (i % window == 0) {
            sum = 0.0;
            for (std::size_t j = i; j < i + window; ++j) sum += values[j];
        } else {
            sum += values[i + window - 1] - values[i - 1];
        }
        out.push_back({keys[i + window - 1], sum / w});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Distance comparison
// ---------------------------------------------------------------------------

struct DistanceReport {
    std::vector<double> pointwise;
    double euclidean = 0.0;
    double mean_abs = 0.0;
    std::size_t n = 0;
    bool truncated = false;  // inputs had different lengths

    friend bool operator==(const DistanceReport&, const DistanceReport&) = default;
};

template <class Source>
std::vector<double> field_values(const Source& source, Field field) {
    std::vector<double> v;
    for_each_record_in(source, [&](const Record& r) { v.push_back(field_value(r, field)); });
    return v;
}

inline DistanceReport distance_between(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ValidationError("distance comparison needs two non-empty selections");
    DistanceReport rep;
    rep.n = std::min(a.size(), b.size());
    rep.truncated = a.size() != b.size();
    rep.pointwise.reserve(rep.n);
    double sum_abs = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < rep.n; ++k) {
        const double d = a[k] - b[k];
        rep.pointwise.push_back(std::abs(d));
        sum_abs += std::abs(d);
        sum_sq += d * d;
    }
    rep.euclidean = std::sqrt(sum_sq);
    rep.mean_abs = sum_abs / static_cast<double>(rep.n);
    return rep;
}

// Positional alignment: the k-th selected record of `a` against the k-th of
// `b`, truncated to the shorter selection.
template <class SourceA, class SourceB>
DistanceReport distance_comparison(const SourceA& a, const SourceB& b, Field field) {
    const auto va = field_values(a, field);
    const auto vb = field_values(b, field);
    return distance_between(va, vb);
}

// ---------------------------------------------------------------------------
// Training / tests / validation split over whole periods
// ---------------------------------------------------------------------------

struct SplitRatios {
    double train = 0.6;
    double test = 0.2;
    double validation = 0.2;
};

struct SplitAssignment {
    std::vector<KeyRange> training;
    std::vector<KeyRange> tests;
    std::vector<KeyRange> validation;
    std::uint64_t seed = 0;

    friend bool operator==(const SplitAssignment&, const SplitAssignment&) = default;
};

struct SplitResult {
    SplitAssignment assignment;
    std::vector<Selection> training;
    std::vector<Selection> tests;
    std::vector<Selection> validation;
};

// Group sizes for P periods: floor(train*P), floor(test*P), remainder.
// A 1e-9 slack keeps products like 0.7*10 from flooring to 6.
inline std::array<std::size_t, 3> split_sizes(std::size_t periods, const SplitRatios& ratios) {
    const auto p = static_cast<double>(periods);
    const auto n_train = std::min(periods, static_cast<std::size_t>(std::floor(ratios.train * p + 1e-9)));
    const auto n_test = std::min(periods - n_train, static_cast<std::size_t>(std::floor(ratios.test * p + 1e-9)));
    return {n_train, n_test, periods - n_train - n_test};
}

inline void require_disjoint_periods(std::span<const KeyRange> periods) {
    std::vector<KeyRange> sorted(periods.begin(), periods.end());
    for (const auto& r : sorted) require_valid_range(r.lo, r.hi);
    std::ranges::sort(sorted, {}, &KeyRange::lo);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i - 1].hi >= sorted[i].lo) {
            throw ValidationError("periods [" + std::to_string(sorted[i - 1].lo) + ", " +
                                  std::to_string(sorted[i - 1].hi) + "] and [" + std::to_string(sorted[i].lo) + ", " +
                                  std::to_string(sorted[i].hi) + "] overlap");
        }
    }
}

// Shuffles the periods (DeterministicRng + Fisher-Yates, see random.hpp),
// then deals them out in order: training, tests, validation.
inline SplitResult split_tvt(const Dataset& dataset, const RangeIndex& index, std::span<const KeyRange> periods,
                             const SplitRatios& ratios, std::uint64_t seed) {
    if (periods.empty()) throw ValidationError("split needs at least one period");
    if (!(ratios.train > 0 && ratios.test > 0 && ratios.validation > 0)) {
        throw ValidationError("split ratios must all be positive");
    }
    if (std::abs(ratios.train + ratios.test + ratios.validation - 1.0) > 1e-9) {
        throw ValidationError("split ratios must sum to 1");
    }
    require_disjoint_periods(periods);

    std::vector<KeyRange> order(periods.begin(), periods.end());
    DeterministicRng rng(seed);
    deterministic_shuffle(order, rng);

    const auto sizes = split_sizes(order.size(), ratios);
    SplitResult out;
    out.assignment.seed = seed;
    std::size_t i = 0;
    auto deal = [&](std::size_t count, std::vector<KeyRange>& ranges, std::vector<Selection>& sels) {
        for (std::size_t k = 0; k < count; ++k, ++i) {
            ranges.push_back(order[i]);
            sels.push_back(select_period(dataset, index, order[i].lo, order[i].hi));
        }
    };
    deal(sizes[0], out.assignment.training, out.training);
    deal(sizes[1], out.assignment.tests, out.tests);
    deal(sizes[2], out.assignment.validation, out.validation);
    return out;
}

// ---------------------------------------------------------------------------
// Event analysis: value distribution before vs after an event key
// ---------------------------------------------------------------------------

struct EventReport {
    KeyRange before;
    KeyRange after;
    std::size_t before_count = 0;
    std::size_t after_count = 0;
    double range_min = 0.0;
    double range_max = 0.0;
    std::vector<double> before_hist;  // normalized to sum 1
    std::vector<double> after_hist;
    double l1_distance = 0.0;  // in [0, 2]

    friend bool operator==(const EventReport&, const EventReport&) = default;
};

// Equal-width bins over the combined [min, max] of both samples; a
// degenerate range puts everything in bin 0.
inline EventReport compare_distributions(std::span<const double> before, std::span<const double> after,
                                         std::size_t bins) {
    if (bins < 1) throw ValidationError("histogram needs at least one bin");
    if (before.empty() || after.empty()) throw ValidationError("event window selects no records");
    EventReport rep;
    rep.before_count = before.size();
    rep.after_count = after.size();
    const auto [mn_b, mx_b] = std::ranges::minmax(before);
    const auto [mn_a, mx_a] = std::ranges::minmax(after);
    rep.range_min = std::min(mn_b, mn_a);
    rep.range_max = std::max(mx_b, mx_a);
    const double width = rep.range_max - rep.range_min;

    auto histogram = [&](std::span<const double> xs) {
        std::vector<double> h(bins, 0.0);
        for (double x : xs) {
            std::size_t b = 0;
            if (width > 0) {
                b = static_cast<std::size_t>((x - rep.range_min) / width * static_cast<double>(bins));
                b = std::min(b, bins - 1);
            }
            h[b] += 1.0;
        }
        for (double& v : h) v /= static_cast<double>(xs.size());
        return h;
    };
    rep.before_hist = histogram(before);
    rep.after_hist = histogram(after);
    for (std::size_t b = 0; b < bins; ++b) rep.l1_distance += std::abs(rep.before_hist[b] - rep.after_hist[b]);
    return rep;
}

// Before window [event - before_span, event - 1], after window
// [event, event + after_span - 1], both resolved through the index.
inline EventReport event_analysis(const Dataset& dataset, const RangeIndex& index, Key event_key,
                                  std::int64_t before_span, std::int64_t after_span, Field field, std::size_t bins) {
    if (before_span < 1 || after_span < 1) throw ValidationError("event spans must be >= 1");
    if (bins < 1) throw ValidationError("histogram needs at least one bin");
    const auto before_lo = detail::checked_affine(event_key, -1, static_cast<std::uint64_t>(before_span));
    const auto after_hi = detail::checked_affine(event_key, 1, static_cast<std::uint64_t>(after_span) - 1);
    if (!before_lo || !after_hi || event_key == std::numeric_limits<Key>::min()) {
        throw ValidationError("event windows overflow the key range");
    }
    const KeyRange before{*before_lo, event_key - 1};
    const KeyRange after{event_key, *after_hi};
    const auto vb = field_values(select_period(dataset, index, before.lo, before.hi), field);
    const auto va = field_values(select_period(dataset, index, after.lo, after.hi), field);
    if (vb.empty()) throw ValidationError("event window before the event selects no records");
    if (va.empty()) throw ValidationError("event window after the event selects no records");
    auto rep = compare_distributions(vb, va, bins);
    rep.before = before;
    rep.after = after;
    return rep;
}

}  // namespace oseba

#endif  // OSEBA_ANALYSIS_HPP_
