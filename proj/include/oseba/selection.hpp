#ifndef OSEBA_SELECTION_HPP_
#define OSEBA_SELECTION_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "oseba/dataset.hpp"
#include "oseba/range_index.hpp"

namespace oseba {

// Non-materialized query result: a dataset handle, the contiguous ordinals
// the index resolved, and the closed key range to apply inside them.
struct Selection {
    Dataset dataset;
    std::optional<OrdinalInterval> partitions;  // nullopt: nothing intersects
    KeyRange range;

    bool empty() const noexcept { return !partitions.has_value(); }
    std::size_t partition_span() const noexcept { return partitions ? partitions->size() : 0; }
};

// Throws unless `index` describes `dataset`'s partitioning (count and span).
inline void require_index_matches(const Dataset& dataset, const RangeIndex& index) {
    if (!dataset.valid()) throw ValidationError("invalid dataset reference");
    if (index_partition_count(index) != dataset.partition_count()) {
        throw ValidationError("index covers " + std::to_string(index_partition_count(index)) +
                              " partitions but the dataset has " + std::to_string(dataset.partition_count()));
    }
    if (index_key_lo(index) != dataset.key_lo() || index_key_hi(index) != dataset.key_hi()) {
        throw ValidationError("index key span does not match the dataset");
    }
}

inline Selection select_period(const Dataset& dataset, const RangeIndex& index, Key lo, Key hi) {
    require_valid_range(lo, hi);
    require_index_matches(dataset, index);
    return Selection{dataset, lookup_range(index, lo, hi), KeyRange{lo, hi}};
}

// ---------------------------------------------------------------------------
// Reducers. A reducer folds records one at a time with add(); reducers that
// also provide merge() can be folded per partition chunk in parallel and
// combined in ordinal order.
// ---------------------------------------------------------------------------

template <class R>
concept RecordReducer = std::copy_constructible<R> && requires(R r, const Record& rec) { r.add(rec); };

template <class R>
concept MergeableReducer = RecordReducer<R> && requires(R a, const R& b) { a.merge(b); };

struct CountReducer {
    std::uint64_t count = 0;
    void add(const Record&) noexcept { ++count; }
    void merge(const CountReducer& o) noexcept { count += o.count; }
};

struct SumReducer {
    Field field = Field::temperature;
    double sum = 0.0;
    void add(const Record& r) noexcept { sum += field_value(r, field); }
    void merge(const SumReducer& o) noexcept { sum += o.sum; }
};

struct ScanOptions {
    // Worker threads for mergeable reducers; 0 or 1 scans sequentially.
    unsigned threads = 1;
};

namespace detail {

// Records of partition `p` that fall in [lo, hi]. Only the boundary
// partitions of a selection can be partially covered, so interior ones are
// returned whole without searching.
inline std::span<const Record> covered_records(const Partition& p, Key lo, Key hi) {
    auto recs = p.records();
    if (lo <= p.key_lo() && p.key_hi() - 1 <= hi) return recs;
    const auto b = std::ranges::lower_bound(recs, lo, {}, &Record::key);
    const auto e = std::ranges::upper_bound(recs, hi, {}, &Record::key);
    if (b >= e) return {};
    return recs.subspan(static_cast<std::size_t>(b - recs.begin()), static_cast<std::size_t>(e - b));
}

inline void require_selection_valid(const Selection& s) {
    if (!s.dataset.valid()) throw ValidationError("selection refers to no dataset");
    if (s.partitions && (s.partitions->first > s.partitions->last ||
                         s.partitions->last >= s.dataset.partition_count())) {
        throw ValidationError("selection partition interval is out of range for its dataset");
    }
}

}  // namespace detail

// Calls fn(record) for every selected record in key order, touching only the
// selection's partitions.
template <class Fn>
void visit_selection(const Selection& s, Fn&& fn, ScanStats* stats = nullptr) {
    detail::require_selection_valid(s);
    if (s.empty()) return;
    ScanStats local;
    for (std::size_t i = s.partitions->first; i <= s.partitions->last; ++i) {
        const Partition& p = s.dataset.partition(i);
        ++local.partitions;
        local.records += p.size();
        for (const Record& r : detail::covered_records(p, s.range.lo, s.range.hi)) fn(r);
    }
    if (stats) *stats += local;
}

// Folds the selection into a copy of `init`. Sequential in ordinal order
// unless the reducer is mergeable and more than one thread is allowed.
template <RecordReducer R>
R scan_selection(const Selection& s, R init, ScanStats* stats = nullptr, ScanOptions options = {}) {
    detail::require_selection_valid(s);
    if (s.empty()) return init;

    if constexpr (MergeableReducer<R>) {
        const std::size_t n = s.partitions->size();
        const std::size_t workers = std::min<std::size_t>(options.threads, n);
        if (workers > 1) {
            std::vector<R> partial(workers, init);
            std::vector<ScanStats> partial_stats(workers);
            std::vector<std::jthread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    const std::size_t begin = s.partitions->first + n * w / workers;
                    const std::size_t end = s.partitions->first + n * (w + 1) / workers;
                    for (std::size_t i = begin; i < end; ++i) {
                        const Partition& p = s.dataset.partition(i);
                        ++partial_stats[w].partitions;
                        partial_stats[w].records += p.size();
                        for (const Record& r : detail::covered_records(p, s.range.lo, s.range.hi)) partial[w].add(r);
                    }
                });
            }
            pool.clear();
            R out = std::move(partial.front());
            for (std::size_t w = 1; w < workers; ++w) out.merge(partial[w]);
            if (stats) {
                for (const auto& ps : partial_stats) *stats += ps;
            }
            return out;
        }
    }

    R acc = std::move(init);
    visit_selection(s, [&](const Record& r) { acc.add(r); }, stats);
    return acc;
}

// Selection covering every record of the dataset.
inline Selection select_all(const Dataset& dataset) {
    if (!dataset.valid()) throw ValidationError("invalid dataset reference");
    return Selection{dataset, OrdinalInterval{0, dataset.partition_count() - 1},
                     KeyRange{dataset.key_lo(), dataset.key_hi() - 1}};
}

}  // namespace oseba

#endif  // OSEBA_SELECTION_HPP_
