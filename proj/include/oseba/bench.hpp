#ifndef OSEBA_BENCH_HPP_
#define OSEBA_BENCH_HPP_

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oseba/analysis.hpp"
#include "oseba/dataset.hpp"
#include "oseba/range_index.hpp"
#include "oseba/selection.hpp"

namespace oseba::bench {

struct Phase {
    Key lo = 0;
    Key hi = 0;
    std::string label;

    friend bool operator==(const Phase&, const Phase&) = default;
};

struct WorkloadSpec {
    std::vector<Phase> phases;
    Field field = Field::temperature;

    friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;
};

inline void validate_workload(const WorkloadSpec& w) {
    if (w.phases.empty()) throw ValidationError("workload has no phases");
    for (const auto& p : w.phases) {
        if (p.lo > p.hi) throw ValidationError("workload phase '" + p.label + "' has lo > hi");
    }
}

// Five phases over the dataset's key span W, selecting 0.30, 0.30, 0.40,
// 0.50 and 0.50 of W. Phase p (0-based) starts at offset 0.1*p*W, pulled back
// if needed so it ends inside the span. Cumulatively the phases select 1.0*W
// after phase 3 and 2.0*W after phase 5.
inline WorkloadSpec default_workload(const Dataset& dataset, Field field = Field::temperature) {
    if (!dataset.valid() || dataset.partition_count() == 0) throw ValidationError("dataset is empty");
    static constexpr std::array<int, 5> kTenths = {3, 3, 4, 5, 5};
    const __int128 lo = dataset.key_lo();
    const __int128 span = static_cast<__int128>(dataset.key_hi()) - lo;
    WorkloadSpec w;
    w.field = field;
    for (int p = 0; p < static_cast<int>(kTenths.size()); ++p) {
        const __int128 len = std::max<__int128>(1, span * kTenths[p] / 10);
        const __int128 offset = std::min<__int128>(span * p / 10, span - len);
        const auto start = static_cast<Key>(lo + offset);
        w.phases.push_back({start, static_cast<Key>(lo + offset + len - 1), "period-" + std::to_string(p + 1)});
    }
    return w;
}

enum class Mode { baseline, oseba };

inline std::string_view mode_name(Mode m) noexcept { return m == Mode::baseline ? "baseline" : "oseba"; }

inline std::optional<Mode> parse_mode(std::string_view s) noexcept {
    if (s == "baseline") return Mode::baseline;
    if (s == "oseba") return Mode::oseba;
    return std::nullopt;
}

struct PhaseMetrics {
    std::string label;
    Key lo = 0;
    Key hi = 0;
    std::uint64_t selected_records = 0;
    std::uint64_t accounted_bytes = 0;  // after the phase
    std::uint64_t partition_scans_cum = 0;
    double wall_seconds_cum = 0.0;
    std::optional<StatsSummary> stats;  // nullopt when the phase selects nothing

    friend bool operator==(const PhaseMetrics&, const PhaseMetrics&) = default;
};

struct MetricsReport {
    Mode mode = Mode::baseline;
    std::optional<IndexKind> index_kind;  // oseba only
    Field field = Field::temperature;
    std::uint64_t partition_count = 0;
    std::uint64_t raw_bytes = 0;
    std::uint64_t index_bytes = 0;
    std::vector<PhaseMetrics> per_phase;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

struct RunOptions {
    // Baseline only: release each phase's materialized records before the
    // next phase instead of keeping them all live.
    bool evict = false;
    ScanOptions scan;
};

// Runs every phase in order. Baseline materializes each phase with a full
// scan and keeps the result live; oseba builds the index (timed as part of
// phase 1) and scans only the selected partitions.
inline MetricsReport run_workload(const Dataset& dataset, const WorkloadSpec& workload, Mode mode,
                                  std::optional<IndexKind> index_kind, RunOptions options = {}) {
    validate_workload(workload);
    if (!dataset.valid()) throw ValidationError("invalid dataset reference");
    if (mode == Mode::oseba && !index_kind) throw ValidationError("oseba mode requires an index kind");
    if (mode == Mode::baseline && index_kind) throw ValidationError("baseline mode does not use an index");

    using clock = std::chrono::steady_clock;
    MetricsReport rep;
    rep.mode = mode;
    rep.index_kind = index_kind;
    rep.field = workload.field;
    rep.partition_count = dataset.partition_count();
    rep.raw_bytes = dataset.accounted_bytes();

    ScanStats scans;
    double wall = 0.0;
    std::vector<MaterializedDerived> live;
    std::optional<RangeIndex> index;

    for (const Phase& phase : workload.phases) {
        PhaseMetrics pm;
        pm.label = phase.label;
        pm.lo = phase.lo;
        pm.hi = phase.hi;
        const auto t0 = clock::now();
        if (mode == Mode::baseline) {
            auto derived = full_scan_filter(dataset, phase.lo, phase.hi, &scans);
            pm.selected_records = derived.kept_records.size();
            if (!derived.kept_records.empty()) pm.stats = descriptive_stats(derived, workload.field);
            if (options.evict) live.clear();
            live.push_back(std::move(derived));
        } else {
            if (!index) {
                index = build_index(dataset, *index_kind);
                rep.index_bytes = index_accounted_bytes(*index);
            }
            const Selection sel = select_period(dataset, *index, phase.lo, phase.hi);
            const auto acc = scan_selection(sel, StatsAccumulator(workload.field), &scans, options.scan);
            pm.selected_records = acc.count();
            if (acc.count() > 0) pm.stats = acc.summary();
        }
        wall += std::chrono::duration<double>(clock::now() - t0).count();

        std::uint64_t bytes = rep.raw_bytes + rep.index_bytes;
        for (const auto& d : live) bytes += d.accounted_bytes();
        pm.accounted_bytes = bytes;
        pm.partition_scans_cum = scans.partitions;
        pm.wall_seconds_cum = wall;
        rep.per_phase.push_back(std::move(pm));
    }
    return rep;
}

// Runs the workload `repeats` times and reports per-phase median cumulative
// wall time; every other metric is deterministic and taken from the first run.
inline MetricsReport run_workload_median(const Dataset& dataset, const WorkloadSpec& workload, Mode mode,
                                         std::optional<IndexKind> index_kind, std::size_t repeats,
                                         RunOptions options = {}) {
    if (repeats < 1) throw ValidationError("repeat count must be >= 1");
    std::vector<MetricsReport> runs;
    for (std::size_t i = 0; i < repeats; ++i) runs.push_back(run_workload(dataset, workload, mode, index_kind, options));
    MetricsReport out = runs.front();
    for (std::size_t p = 0; p < out.per_phase.size(); ++p) {
        std::vector<double> t;
        for (const auto& r : runs) t.push_back(r.per_phase[p].wall_seconds_cum);
        std::ranges::sort(t);
        out.per_phase[p].wall_seconds_cum =
            t.size() % 2 ? t[t.size() / 2] : 0.5 * (t[t.size() / 2 - 1] + t[t.size() / 2]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

// |a - b| <= tol * max(|a|, |b|); exact equality always passes.
inline bool relatively_close(double a, double b, double tol = 1e-9) noexcept {
    if (a == b) return true;
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline bool stats_close(const std::optional<StatsSummary>& a, const std::optional<StatsSummary>& b,
                        double tol = 1e-9) noexcept {
    if (!a || !b) return !a && !b;
    return a->count == b->count && relatively_close(a->max, b->max, tol) && relatively_close(a->mean, b->mean, tol) &&
           relatively_close(a->stddev, b->stddev, tol);
}

struct PhaseComparison {
    std::string label;
    std::optional<double> memory_ratio;  // baseline / oseba; nullopt when the denominator is 0
    std::optional<double> scan_ratio;
    std::optional<double> speedup;
    bool stats_match = true;

    friend bool operator==(const PhaseComparison&, const PhaseComparison&) = default;
};

struct Comparison {
    std::vector<PhaseComparison> per_phase;
    bool all_stats_match = true;

    friend bool operator==(const Comparison&, const Comparison&) = default;
};

inline std::optional<double> ratio(double num, double den) noexcept {
    if (num == den) return 1.0;
    if (den == 0.0) return std::nullopt;
    return num / den;
}

inline Comparison compare_runs(const MetricsReport& baseline, const MetricsReport& oseba) {
    if (baseline.per_phase.size() != oseba.per_phase.size()) {
        throw ValidationError("reports cover different numbers of phases");
    }
    if (baseline.field != oseba.field || baseline.raw_bytes != oseba.raw_bytes ||
        baseline.partition_count != oseba.partition_count) {
        throw ValidationError("reports were produced from different datasets or fields");
    }
    Comparison c;
    for (std::size_t p = 0; p < baseline.per_phase.size(); ++p) {
        const auto& b = baseline.per_phase[p];
        const auto& o = oseba.per_phase[p];
        if (b.label != o.label || b.lo != o.lo || b.hi != o.hi) {
            throw ValidationError("reports disagree on phase " + std::to_string(p + 1) + " of the workload");
        }
        PhaseComparison pc;
        pc.label = b.label;
        pc.memory_ratio = ratio(static_cast<double>(b.accounted_bytes), static_cast<double>(o.accounted_bytes));
        pc.scan_ratio = ratio(static_cast<double>(b.partition_scans_cum), static_cast<double>(o.partition_scans_cum));
        pc.speedup = ratio(b.wall_seconds_cum, o.wall_seconds_cum);
        pc.stats_match = b.selected_records == o.selected_records && stats_close(b.stats, o.stats);
        c.all_stats_match = c.all_stats_match && pc.stats_match;
        c.per_phase.push_back(std::move(pc));
    }
    return c;
}

}  // namespace oseba::bench

#endif  // OSEBA_BENCH_HPP_
