#ifndef OSEBA_DATASET_HPP_
#define OSEBA_DATASET_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "oseba/error.hpp"
#include "oseba/random.hpp"
#include "oseba/record.hpp"

namespace oseba {

// Fixed-capacity, key-sorted block of records covering [key_lo, key_hi).
class Partition {
public:
    Partition(std::size_t ordinal, std::vector<Record> records, Key key_lo, Key key_hi)
        : ordinal_(ordinal), records_(std::move(records)), key_lo_(key_lo), key_hi_(key_hi) {}

    std::size_t ordinal() const noexcept { return ordinal_; }
    std::span<const Record> records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    Key key_lo() const noexcept { return key_lo_; }
    Key key_hi() const noexcept { return key_hi_; }

    // True when [key_lo, key_hi) intersects the closed query [lo, hi].
    bool intersects(Key lo, Key hi) const noexcept { return key_lo_ <= hi && lo < key_hi_; }

private:
    std::size_t ordinal_;
    std::vector<Record> records_;
    Key key_lo_;
    Key key_hi_;
};

// Counters for how much data a query touched.
struct ScanStats {
    std::uint64_t partitions = 0;
    std::uint64_t records = 0;

    ScanStats& operator+=(const ScanStats& o) noexcept {
        partitions += o.partitions;
        records += o.records;
        return *this;
    }
};

// Immutable partitioned dataset. Copies share the same partition storage, so
// a Dataset is a cheap handle; two handles are the same dataset iff
// same_as() holds. A default-constructed Dataset refers to nothing.
class Dataset {
public:
    Dataset() = default;

    // Partitions `records` (strictly ascending by key, finite measurements)
    // into blocks of `capacity`. Partition i covers [first key of i, first
    // key of i+1); the last one ends at last key + 1.
    static Dataset from_sorted(std::vector<Record> records, std::size_t capacity) {
        if (capacity < 1) throw ValidationError("partition capacity must be >= 1");
        if (records.empty()) throw ValidationError("dataset must contain at least one record");
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (!measurements_finite(records[i])) {
                throw ValidationError("non-finite measurement at key " + std::to_string(records[i].key));
            }
            if (i > 0 && records[i - 1].key >= records[i].key) {
                if (records[i - 1].key == records[i].key) {
                    throw ValidationError("duplicate key " + std::to_string(records[i].key));
                }
                throw ValidationError("records not sorted by key at position " + std::to_string(i));
            }
        }
        if (records.back().key == std::numeric_limits<Key>::max()) {
            throw ValidationError("last key leaves no room for an exclusive upper bound");
        }

        auto storage = std::make_shared<Storage>();
        storage->capacity = capacity;
        storage->record_count = records.size();
        const std::size_t m = (records.size() + capacity - 1) / capacity;
        storage->partitions.reserve(m);
        for (std::size_t p = 0; p < m; ++p) {
            const std::size_t begin = p * capacity;
            const std::size_t end = std::min(begin + capacity, records.size());
            const Key lo = records[begin].key;
            const Key hi = end < records.size() ? records[end].key : records[end - 1].key + 1;
            std::vector<Record> block(records.begin() + static_cast<std::ptrdiff_t>(begin),
                                      records.begin() + static_cast<std::ptrdiff_t>(end));
            storage->partitions.emplace_back(p, std::move(block), lo, hi);
        }
        Dataset d;
        d.storage_ = std::move(storage);
        return d;
    }

    bool valid() const noexcept { return storage_ != nullptr; }
    bool same_as(const Dataset& o) const noexcept { return storage_ == o.storage_; }

    std::span<const Partition> partitions() const noexcept {
        return storage_ ? std::span<const Partition>(storage_->partitions) : std::span<const Partition>{};
    }
    const Partition& partition(std::size_t ordinal) const { return storage_->partitions.at(ordinal); }
    std::size_t partition_count() const noexcept { return storage_ ? storage_->partitions.size() : 0; }
    std::size_t capacity() const noexcept { return storage_ ? storage_->capacity : 0; }
    std::size_t record_count() const noexcept { return storage_ ? storage_->record_count : 0; }
    std::uint64_t record_width_bytes() const noexcept { return kRecordWidthBytes; }
    std::uint64_t accounted_bytes() const noexcept { return record_count() * kRecordWidthBytes; }

    // Overall half-open span [first key_lo, last key_hi).
    Key key_lo() const { return partitions().front().key_lo(); }
    Key key_hi() const { return partitions().back().key_hi(); }

    template <class Fn>
    void for_each_record(Fn&& fn) const {
        for (const auto& p : partitions()) {
            for (const auto& r : p.records()) fn(r);
        }
    }

    std::vector<Record> all_records() const {
        std::vector<Record> out;
        out.reserve(record_count());
        for_each_record([&](const Record& r) { out.push_back(r); });
        return out;
    }

    // Structural equality: same records, same partitioning.
    bool equivalent(const Dataset& o) const {
        if (partition_count() != o.partition_count() || capacity() != o.capacity()) return false;
        for (std::size_t i = 0; i < partition_count(); ++i) {
            const auto& a = partition(i);
            const auto& b = o.partition(i);
            if (a.key_lo() != b.key_lo() || a.key_hi() != b.key_hi()) return false;
            if (!std::ranges::equal(a.records(), b.records())) return false;
        }
        return true;
    }

private:
    struct Storage {
        std::vector<Partition> partitions;
        std::size_t capacity = 0;
        std::size_t record_count = 0;
    };
    std::shared_ptr<const Storage> storage_;
};

// Sorts (stably) and partitions arbitrary-order records. Duplicate keys are
// rejected rather than merged.
inline Dataset dataset_from_records(std::vector<Record> records, std::size_t capacity) {
    std::ranges::stable_sort(records, {}, &Record::key);
    return Dataset::from_sorted(std::move(records), capacity);
}

// Keys key_start + i*key_stride for i in [0, n). Measurements are drawn from
// a DeterministicRng seeded with `seed`, four draws per record in field order:
// temperature in [-10, 40), humidity in [0, 100), wind speed in [0, 30),
// wind direction in [0, 360).
inline Dataset generate_synthetic(std::size_t n, Key key_start, Key key_stride, std::size_t capacity,
                                  std::uint64_t seed) {
    if (n < 1) throw ValidationError("record count must be >= 1");
    if (capacity < 1) throw ValidationError("partition capacity must be >= 1");
    if (key_stride < 1) throw ValidationError("key stride must be >= 1");
    const __int128 last = static_cast<__int128>(key_start) +
                          static_cast<__int128>(n - 1) * static_cast<__int128>(key_stride);
    if (last >= std::numeric_limits<Key>::max()) {
        throw ValidationError("synthetic key range overflows a 64-bit key");
    }

    DeterministicRng rng(seed);
    std::vector<Record> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Record r;
        r.key = key_start + static_cast<Key>(i) * key_stride;
        r.temperature = rng.next_in(-10.0, 40.0);
        r.humidity = rng.next_in(0.0, 100.0);
        r.wind_speed = rng.next_in(0.0, 30.0);
        r.wind_direction = rng.next_in(0.0, 360.0);
        records.push_back(r);
    }
    return Dataset::from_sorted(std::move(records), capacity);
}

// Records copied out of a dataset by the baseline filter path.
struct MaterializedDerived {
    Dataset source;
    std::vector<Record> kept_records;

    std::uint64_t accounted_bytes() const noexcept { return kept_records.size() * kRecordWidthBytes; }
    std::span<const Record> records() const noexcept { return kept_records; }
};

// Baseline path: visit every partition, test every record, copy matches.
// Partition content is treated as opaque, so no range metadata is consulted.
inline MaterializedDerived full_scan_filter(const Dataset& dataset, Key lo, Key hi, ScanStats* stats = nullptr) {
    require_valid_range(lo, hi);
    if (!dataset.valid()) throw ValidationError("invalid dataset reference");
    MaterializedDerived out{dataset, {}};
    ScanStats local;
    for (const auto& p : dataset.partitions()) {
        ++local.partitions;
        local.records += p.size();
        for (const auto& r : p.records()) {
            if (lo <= r.key && r.key <= hi) out.kept_records.push_back(r);
        }
    }
    if (stats) *stats += local;
    return out;
}

}  // namespace oseba

#endif  // OSEBA_DATASET_HPP_
