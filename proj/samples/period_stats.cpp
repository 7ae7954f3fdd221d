// Builds a synthetic dataset, indexes it and summarizes a few periods
// without materializing them.

#include <iostream>

#include "oseba/oseba.hpp"

int main() {
    using namespace oseba;

    const Dataset ds = generate_synthetic(150000, 0, 1, 10000, 42);
    const RangeIndex index = build_index(ds, IndexKind::cias);
    std::cout << ds.partition_count() << " partitions, index " << index_accounted_bytes(index) << " bytes\n";

    for (const auto& [lo, hi] : {KeyRange{0, 29999}, KeyRange{60000, 64999}, KeyRange{140000, 149999}}) {
        ScanStats scanned;
        const Selection sel = select_period(ds, index, lo, hi);
        const StatsSummary s = descriptive_stats(sel, Field::temperature, &scanned);
        std::cout << "[" << lo << ", " << hi << "] partitions scanned " << scanned.partitions << ", n " << s.count
                  << ", max " << s.max << ", mean " << s.mean << ", stddev " << s.stddev << "\n";
    }

    const auto ma = moving_average(select_period(ds, index, 0, 99), 10, Field::temperature);
    std::cout << "10-record moving average: " << ma.size() << " points, last " << ma.back().value << "\n";
}
