#ifndef OSEBA_RANGE_INDEX_HPP_
#define OSEBA_RANGE_INDEX_HPP_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "oseba/dataset.hpp"
#include "oseba/error.hpp"
#include "oseba/record.hpp"

namespace oseba {

// Inclusive interval of partition ordinals.
struct OrdinalInterval {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t size() const noexcept { return last - first + 1; }
    friend bool operator==(const OrdinalInterval&, const OrdinalInterval&) = default;
};

// Number of probes made by a binary search. Only the search's own element
// comparisons are counted, not the final containment check.
struct ComparisonCounter {
    std::uint64_t probes = 0;
};

namespace detail {

// Smallest i in [0, n) with pred(i) true, or n; pred must be monotone
// (false...false true...true).
template <class Pred>
std::size_t partition_point(std::size_t n, Pred pred, ComparisonCounter* counter) {
    std::size_t lo = 0;
    std::size_t len = n;
    while (len > 0) {
        const std::size_t half = len / 2;
        const std::size_t mid = lo + half;
        if (counter) ++counter->probes;
        if (pred(mid)) {
            len = half;
        } else {
            lo = mid + 1;
            len -= half + 1;
        }
    }
    return lo;
}

// a + b * c in 128 bits, checked to fit a Key.
inline std::optional<Key> checked_affine(Key a, std::int64_t b, std::uint64_t c) {
    const __int128 v = static_cast<__int128>(a) + static_cast<__int128>(b) * static_cast<__int128>(c);
    if (v > std::numeric_limits<Key>::max() || v < std::numeric_limits<Key>::min()) return std::nullopt;
    return static_cast<Key>(v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Table-based index: one (ordinal, key_lo, key_hi) entry per partition.
// ---------------------------------------------------------------------------

struct TableEntry {
    std::size_t ordinal = 0;
    Key key_lo = 0;  // inclusive
    Key key_hi = 0;  // exclusive

    friend bool operator==(const TableEntry&, const TableEntry&) = default;
};

class PartitionRangeTable {
public:
    PartitionRangeTable() = default;

    // Validates: ordinals are 0..m-1 in order, every range is non-empty, and
    // ranges are strictly increasing without overlap. Gaps are allowed.
    explicit PartitionRangeTable(std::vector<TableEntry> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw ValidationError("partition range table must have at least one entry");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& e = entries_[i];
            if (e.ordinal != i) {
                throw ValidationError("table entry " + std::to_string(i) + " has ordinal " +
                                      std::to_string(e.ordinal));
            }
            if (e.key_lo >= e.key_hi) {
                throw ValidationError("table entry " + std::to_string(i) + " has an empty key range");
            }
            if (i > 0 && entries_[i - 1].key_hi > e.key_lo) {
                throw ValidationError("table entry " + std::to_string(i) + " overlaps its predecessor");
            }
        }
    }

    std::span<const TableEntry> entries() const noexcept { return entries_; }
    const TableEntry& entry(std::size_t i) const { return entries_.at(i); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    Key key_lo() const { return entries_.front().key_lo; }
    Key key_hi() const { return entries_.back().key_hi; }

    bool tiles() const noexcept {
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            if (entries_[i - 1].key_hi != entries_[i].key_lo) return false;
        }
        return true;
    }

    friend bool operator==(const PartitionRangeTable&, const PartitionRangeTable&) = default;

private:
    std::vector<TableEntry> entries_;
};

inline PartitionRangeTable build_table(const Dataset& dataset) {
    if (!dataset.valid() || dataset.partition_count() == 0) {
        throw ValidationError("cannot index an empty dataset");
    }
    std::vector<TableEntry> entries;
    entries.reserve(dataset.partition_count());
    for (const auto& p : dataset.partitions()) entries.push_back({p.ordinal(), p.key_lo(), p.key_hi()});
    return PartitionRangeTable(std::move(entries));
}

// Binary search for the entry whose [key_lo, key_hi) holds `key`.
inline std::optional<std::size_t> table_lookup(const PartitionRangeTable& table, Key key,
                                               ComparisonCounter* counter = nullptr) {
    const auto e = table.entries();
    const std::size_t ub = detail::partition_point(e.size(), [&](std::size_t i) { return e[i].key_lo > key; }, counter);
    if (ub == 0) return std::nullopt;
    const auto& hit = e[ub - 1];
    if (key >= hit.key_hi) return std::nullopt;  // past the end or in a gap
    return hit.ordinal;
}

// Smallest ordinal interval covering every partition that intersects the
// closed query [lo, hi]: first partition with key_hi > lo through the last
// partition with key_lo <= hi.
inline std::optional<OrdinalInterval> table_lookup_range(const PartitionRangeTable& table, Key lo, Key hi,
                                                         ComparisonCounter* counter = nullptr) {
    require_valid_range(lo, hi);
    const auto e = table.entries();
    const std::size_t first =
        detail::partition_point(e.size(), [&](std::size_t i) { return e[i].key_hi > lo; }, counter);
    const std::size_t end = detail::partition_point(e.size(), [&](std::size_t i) { return e[i].key_lo > hi; }, counter);
    if (first >= end) return std::nullopt;
    return OrdinalInterval{first, end - 1};
}

// ---------------------------------------------------------------------------
// Compressed index with associated search list.
//
// A run stands for `count` consecutive partitions of equal key width
// `stride`, the first starting at `start_key`. The search list holds the start
// key of every run plus the exclusive end of the last one, so locating a key
// is a binary search over runs followed by one division.
// ---------------------------------------------------------------------------

struct Run {
    Key start_key = 0;
    std::int64_t stride = 1;
    std::uint64_t count = 1;
    std::size_t base_ordinal = 0;

    friend bool operator==(const Run&, const Run&) = default;
};

class Cias {
public:
    Cias() = default;

    // Validates every structural invariant; throws ValidationError otherwise.
    Cias(std::vector<Run> runs, std::vector<Key> asl) : runs_(std::move(runs)), asl_(std::move(asl)) {
        if (runs_.empty()) throw ValidationError("CIAS must contain at least one run");
        if (asl_.size() != runs_.size() + 1) {
            throw ValidationError("CIAS search list must have runs + 1 keys");
        }
        std::size_t expected_base = 0;
        for (std::size_t r = 0; r < runs_.size(); ++r) {
            const Run& run = runs_[r];
            const std::string where = "CIAS run " + std::to_string(r);
            if (run.stride < 1) throw ValidationError(where + " has stride < 1");
            if (run.count < 1) throw ValidationError(where + " has count < 1");
            if (run.base_ordinal != expected_base) throw ValidationError(where + " is not ordinal-contiguous");
            if (run.start_key != asl_[r]) throw ValidationError(where + " does not start at its search-list key");
            const auto end = detail::checked_affine(run.start_key, run.stride, run.count);
            if (!end) throw ValidationError(where + " overflows the key range");
            if (*end != asl_[r + 1]) throw ValidationError(where + " does not end at the next search-list key");
            if (run.count > std::numeric_limits<std::size_t>::max() - expected_base) {
                throw ValidationError(where + " overflows the ordinal range");
            }
            expected_base += static_cast<std::size_t>(run.count);
        }
        partition_count_ = expected_base;
    }

    std::span<const Run> runs() const noexcept { return runs_; }
    std::span<const Key> asl() const noexcept { return asl_; }
    std::size_t partition_count() const noexcept { return partition_count_; }
    Key key_lo() const { return asl_.front(); }
    Key key_hi() const { return asl_.back(); }

    friend bool operator==(const Cias& a, const Cias& b) { return a.runs_ == b.runs_ && a.asl_ == b.asl_; }

private:
    std::vector<Run> runs_;
    std::vector<Key> asl_;
    std::size_t partition_count_ = 0;
};

// Greedy left-to-right maximal-run encoding. The table must tile without
// gaps; a width change starts a new run.
inline Cias compress(const PartitionRangeTable& table) {
    const auto e = table.entries();
    if (e.empty()) throw ValidationError("cannot compress an empty table");
    std::vector<Run> runs;
    std::vector<Key> asl;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i > 0 && e[i - 1].key_hi != e[i].key_lo) {
            throw ValidationError("table has a gap before ordinal " + std::to_string(i) +
                                  "; only contiguous tables can be compressed");
        }
        const __int128 w = static_cast<__int128>(e[i].key_hi) - static_cast<__int128>(e[i].key_lo);
        if (w > std::numeric_limits<std::int64_t>::max()) {
            throw ValidationError("partition " + std::to_string(i) + " is too wide to encode");
        }
        const auto width = static_cast<std::int64_t>(w);
        if (!runs.empty() && runs.back().stride == width) {
            ++runs.back().count;
        } else {
            runs.push_back({e[i].key_lo, width, 1, i});
            asl.push_back(e[i].key_lo);
        }
    }
    asl.push_back(e.back().key_hi);
    return Cias(std::move(runs), std::move(asl));
}

inline PartitionRangeTable decompress(const Cias& cias) {
    std::vector<TableEntry> entries;
    entries.reserve(cias.partition_count());
    for (const Run& run : cias.runs()) {
        for (std::uint64_t j = 0; j < run.count; ++j) {
            const Key lo = run.start_key + static_cast<Key>(j) * run.stride;
            entries.push_back({run.base_ordinal + static_cast<std::size_t>(j), lo, lo + run.stride});
        }
    }
    return PartitionRangeTable(std::move(entries));
}

namespace detail {

// Ordinal of the partition holding `key`, which must lie in [asl.front(), asl.back()).
inline std::size_t cias_resolve(const Cias& cias, Key key, ComparisonCounter* counter) {
    const auto asl = cias.asl();
    const std::size_t ub = partition_point(asl.size(), [&](std::size_t i) { return asl[i] > key; }, counter);
    const Run& run = cias.runs()[ub - 1];
    const auto offset = static_cast<std::uint64_t>(static_cast<__int128>(key) - run.start_key);
    return run.base_ordinal + static_cast<std::size_t>(offset / static_cast<std::uint64_t>(run.stride));
}

}  // namespace detail

inline std::optional<std::size_t> cias_lookup(const Cias& cias, Key key, ComparisonCounter* counter = nullptr) {
    if (key < cias.key_lo() || key >= cias.key_hi()) return std::nullopt;
    return detail::cias_resolve(cias, key, counter);
}

// Range form: each end is clamped to the covered span, then resolved
// arithmetically.
inline std::optional<OrdinalInterval> cias_lookup_range(const Cias& cias, Key lo, Key hi,
                                                        ComparisonCounter* counter = nullptr) {
    require_valid_range(lo, hi);
    if (hi < cias.key_lo() || lo >= cias.key_hi()) return std::nullopt;
    const std::size_t first = lo <= cias.key_lo() ? 0 : detail::cias_resolve(cias, lo, counter);
    const std::size_t last =
        hi >= cias.key_hi() - 1 ? cias.partition_count() - 1 : detail::cias_resolve(cias, hi, counter);
    return OrdinalInterval{first, last};
}

// ---------------------------------------------------------------------------
// Either index kind, plus the deterministic size model.
// ---------------------------------------------------------------------------

enum class IndexKind { table, cias };

using RangeIndex = std::variant<PartitionRangeTable, Cias>;

inline IndexKind index_kind(const RangeIndex& index) noexcept {
    return std::holds_alternative<PartitionRangeTable>(index) ? IndexKind::table : IndexKind::cias;
}

inline std::string_view index_kind_name(IndexKind k) noexcept { return k == IndexKind::table ? "table" : "cias"; }

inline std::optional<IndexKind> parse_index_kind(std::string_view s) noexcept {
    if (s == "table") return IndexKind::table;
    if (s == "cias") return IndexKind::cias;
    return std::nullopt;
}

inline RangeIndex build_index(const Dataset& dataset, IndexKind kind) {
    auto table = build_table(dataset);
    if (kind == IndexKind::table) return table;
    return compress(table);
}

// Table: three 8-byte words per entry. CIAS: four words per run plus the
// search list.
inline std::uint64_t index_accounted_bytes(const PartitionRangeTable& table) noexcept { return 24 * table.size(); }

inline std::uint64_t index_accounted_bytes(const Cias& cias) noexcept {
    return 32 * cias.runs().size() + 8 * cias.asl().size();
}

inline std::uint64_t index_accounted_bytes(const RangeIndex& index) noexcept {
    return std::visit([](const auto& i) { return index_accounted_bytes(i); }, index);
}

inline std::size_t index_partition_count(const RangeIndex& index) noexcept {
    return std::visit(
        [](const auto& i) -> std::size_t {
            if constexpr (std::is_same_v<std::decay_t<decltype(i)>, Cias>) {
                return i.partition_count();
            } else {
                return i.size();
            }
        },
        index);
}

inline Key index_key_lo(const RangeIndex& index) {
    return std::visit([](const auto& i) { return i.key_lo(); }, index);
}

inline Key index_key_hi(const RangeIndex& index) {
    return std::visit([](const auto& i) { return i.key_hi(); }, index);
}

inline std::optional<std::size_t> lookup(const RangeIndex& index, Key key, ComparisonCounter* counter = nullptr) {
    if (const auto* t = std::get_if<PartitionRangeTable>(&index)) return table_lookup(*t, key, counter);
    return cias_lookup(std::get<Cias>(index), key, counter);
}

inline std::optional<OrdinalInterval> lookup_range(const RangeIndex& index, Key lo, Key hi,
                                                   ComparisonCounter* counter = nullptr) {
    if (const auto* t = std::get_if<PartitionRangeTable>(&index)) return table_lookup_range(*t, lo, hi, counter);
    return cias_lookup_range(std::get<Cias>(index), lo, hi, counter);
}

}  // namespace oseba

#endif  // OSEBA_RANGE_INDEX_HPP_
