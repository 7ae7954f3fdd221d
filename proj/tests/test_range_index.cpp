#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "oseba/range_index.hpp"

namespace oseba {
namespace {

// 1024 partitions of width 10000 from key 578, then one of width 43.
PartitionRangeTable two_run_table() {
    std::vector<TableEntry> e;
    Key lo = 578;
    for (std::size_t i = 0; i < 1024; ++i, lo += 10000) e.push_back({i, lo, lo + 10000});
    e.push_back({1024, lo, lo + 43});
    return PartitionRangeTable(std::move(e));
}

Cias two_run_cias() {
    return Cias({{578, 10000, 1024, 0}, {10240578, 43, 1, 1024}}, {578, 10240578, 10240621});
}

PartitionRangeTable three_partitions() { return PartitionRangeTable({{0, 0, 10}, {1, 10, 20}, {2, 20, 25}}); }

TEST(BuildTable, CopiesPartitionRanges) {
    const auto ds = generate_synthetic(25, 0, 1, 10, 3);
    const auto t = build_table(ds);
    EXPECT_EQ(t, three_partitions());
    EXPECT_EQ(build_table(generate_synthetic(150000, 0, 1, 10000, 1)).size(), 15u);
    EXPECT_EQ(build_table(generate_synthetic(25, 0, 1, 10, 3)), build_table(generate_synthetic(25, 0, 1, 10, 4)));
    EXPECT_THROW(build_table(Dataset{}), ValidationError);
}

TEST(PartitionRangeTable, RejectsMalformedEntries) {
    EXPECT_THROW(PartitionRangeTable(std::vector<TableEntry>{}), ValidationError);
    EXPECT_THROW(PartitionRangeTable({{1, 0, 10}}), ValidationError);
    EXPECT_THROW(PartitionRangeTable({{0, 10, 10}}), ValidationError);
    EXPECT_THROW(PartitionRangeTable({{0, 0, 10}, {1, 9, 20}}), ValidationError);
    EXPECT_NO_THROW(PartitionRangeTable({{0, 0, 10}, {1, 15, 20}}));
}

TEST(TableLookup, HalfOpenBoundaries) {
    const PartitionRangeTable t({{0, 0, 10}, {1, 10, 20}});
    EXPECT_EQ(table_lookup(t, 10), 1u);
    EXPECT_EQ(table_lookup(t, 9), 0u);
    EXPECT_EQ(table_lookup(t, 0), 0u);
    EXPECT_EQ(table_lookup(t, 19), 1u);
    EXPECT_FALSE(table_lookup(t, 20));
    EXPECT_FALSE(table_lookup(t, -1));
}

TEST(TableLookup, GapIsAbsent) {
    const PartitionRangeTable t({{0, 0, 10}, {1, 15, 20}});
    EXPECT_FALSE(table_lookup(t, 12));
    EXPECT_EQ(table_lookup(t, 15), 1u);
}

TEST(TableLookup, MatchesLinearScan) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        auto entries = oracle::random_tiling(rng);
        // Punch occasional gaps to cover the non-tiling case too.
        if (t % 3 == 0) {
            for (std::size_t i = 0; i < entries.size(); ++i) {
                entries[i].key_lo += static_cast<Key>(2 * i);
                entries[i].key_hi += static_cast<Key>(2 * i);
            }
        }
        const PartitionRangeTable table(entries);
        std::uniform_int_distribution<Key> kd(table.key_lo() - 50, table.key_hi() + 50);
        for (int q = 0; q < 50; ++q) {
            const Key k = kd(rng);
            ASSERT_EQ(table_lookup(table, k), oracle::point(entries, k)) << "key " << k;
        }
    }
}

TEST(TableLookupRange, Examples) {
    const auto t = three_partitions();
    EXPECT_EQ(table_lookup_range(t, 5, 12), (OrdinalInterval{0, 1}));
    EXPECT_FALSE(table_lookup_range(t, 25, 99));
    EXPECT_FALSE(table_lookup_range(t, -10, -1));
    EXPECT_EQ(table_lookup_range(t, -10, 0), (OrdinalInterval{0, 0}));
    EXPECT_EQ(table_lookup_range(t, 24, 1000), (OrdinalInterval{2, 2}));
    EXPECT_EQ(table_lookup_range(t, -100, 1000), (OrdinalInterval{0, 2}));
    EXPECT_THROW(table_lookup_range(t, 5, 4), ValidationError);
}

TEST(TableLookupRange, MatchesBruteForceIntersection) {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 200; ++t) {
        auto entries = oracle::random_tiling(rng);
        if (t % 2 == 0) {
            for (std::size_t i = 0; i < entries.size(); ++i) {
                entries[i].key_lo += static_cast<Key>(5 * i);
                entries[i].key_hi += static_cast<Key>(5 * i);
            }
        }
        const PartitionRangeTable table(entries);
        std::uniform_int_distribution<Key> kd(table.key_lo() - 50, table.key_hi() + 50);
        for (int q = 0; q < 50; ++q) {
            Key a = kd(rng), b = kd(rng);
            if (a > b) std::swap(a, b);
            const auto got = table_lookup_range(table, a, b);
            const auto want = oracle::range(entries, a, b);
            ASSERT_EQ(got.has_value(), want.has_value());
            if (got) {
                EXPECT_EQ(got->first, want->first);
                EXPECT_EQ(got->last, want->second);
            }
        }
    }
}

TEST(Compress, TwoRunGolden) {
    const auto c = compress(two_run_table());
    ASSERT_EQ(c.runs().size(), 2u);
    EXPECT_EQ(c.runs()[0], (oseba::Run{578, 10000, 1024, 0}));
    EXPECT_EQ(c.runs()[1], (oseba::Run{10240578, 43, 1, 1024}));
    EXPECT_EQ(std::vector<Key>(c.asl().begin(), c.asl().end()), (std::vector<Key>{578, 10240578, 10240621}));
    EXPECT_EQ(c, two_run_cias());
}

TEST(Compress, SinglePartition) {
    const auto c = compress(PartitionRangeTable({{0, 0, 10}}));
    ASSERT_EQ(c.runs().size(), 1u);
    EXPECT_EQ(c.runs()[0], (oseba::Run{0, 10, 1, 0}));
    EXPECT_EQ(std::vector<Key>(c.asl().begin(), c.asl().end()), (std::vector<Key>{0, 10}));
}

TEST(Compress, GapIsAnErrorNamingTheOrdinal) {
    try {
        compress(PartitionRangeTable({{0, 0, 10}, {1, 10, 20}, {2, 21, 30}}));
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("ordinal 2"), std::string::npos) << e.what();
    }
}

TEST(Compress, IrregularDataDegradesToOneRunPerPartition) {
    const PartitionRangeTable t({{0, 0, 1}, {1, 1, 3}, {2, 3, 6}, {3, 6, 10}});
    EXPECT_EQ(compress(t).runs().size(), 4u);
}

TEST(Compress, RunCountEqualsEqualWidthBlocks) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 300; ++t) {
        const auto entries = oracle::random_tiling(rng);
        const auto c = compress(PartitionRangeTable(entries));
        EXPECT_EQ(c.runs().size(), oracle::equal_width_blocks(entries));
        EXPECT_LE(c.runs().size(), entries.size());
    }
}

TEST(Decompress, TwoRunExpansion) {
    const auto t = decompress(two_run_cias());
    ASSERT_EQ(t.size(), 1025u);
    EXPECT_EQ(t.entry(0), (TableEntry{0, 578, 10578}));
    EXPECT_EQ(t.entry(1024), (TableEntry{1024, 10240578, 10240621}));
    EXPECT_TRUE(t.tiles());
}

TEST(Decompress, SingleRun) {
    const auto t = decompress(Cias({{0, 10, 3, 0}}, {0, 30}));
    EXPECT_EQ(t, PartitionRangeTable({{0, 0, 10}, {1, 10, 20}, {2, 20, 30}}));
}

TEST(Cias, RejectsInvariantViolations) {
    EXPECT_THROW(Cias({}, {0}), ValidationError);
    EXPECT_THROW(Cias({{0, 10, 3, 0}}, {0}), ValidationError);
    EXPECT_THROW(Cias({{0, 0, 3, 0}}, {0, 0}), ValidationError);
    EXPECT_THROW(Cias({{0, 10, 0, 0}}, {0, 0}), ValidationError);
    EXPECT_THROW(Cias({{0, 10, 3, 1}}, {0, 30}), ValidationError);
    EXPECT_THROW(Cias({{0, 10, 3, 0}}, {0, 31}), ValidationError);
    EXPECT_THROW(Cias({{0, 10, 3, 0}, {30, 5, 1, 2}}, {0, 30, 35}), ValidationError);
    EXPECT_THROW(Cias({{1, 10, 3, 0}}, {0, 30}), ValidationError);
    EXPECT_THROW(Cias({{0, std::numeric_limits<std::int64_t>::max(), 3, 0}}, {0, 0}), ValidationError);
}

TEST(RoundTrip, DecompressCompressIsIdentity) {
    std::mt19937_64 rng(14);
    for (int t = 0; t < 500; ++t) {
        const PartitionRangeTable table(oracle::random_tiling(rng));
        ASSERT_EQ(decompress(compress(table)), table);
    }
}

TEST(RoundTrip, CompressDecompressIsIdentity) {
    std::mt19937_64 rng(15);
    for (int t = 0; t < 500; ++t) {
        auto [runs, asl] = oracle::random_cias_parts(rng);
        const Cias c(runs, asl);
        ASSERT_EQ(compress(decompress(c)), c);
    }
}

TEST(CiasLookup, TwoRunPoints) {
    const auto c = two_run_cias();
    EXPECT_EQ(cias_lookup(c, 578), 0u);
    EXPECT_EQ(cias_lookup(c, 10577), 0u);
    EXPECT_EQ(cias_lookup(c, 10578), 1u);
    EXPECT_EQ(cias_lookup(c, 10240620), 1024u);
    EXPECT_EQ(cias_lookup(c, 10240620), table_lookup(decompress(c), 10240620));
    EXPECT_FALSE(cias_lookup(c, 577));
    EXPECT_FALSE(cias_lookup(c, 10240621));
}

TEST(CiasLookupRange, TwoRunRanges) {
    const auto c = two_run_cias();
    EXPECT_EQ(cias_lookup_range(c, 578, 10577), (OrdinalInterval{0, 0}));
    const auto expanded = decompress(c);
    const auto oracle_hit =
        oracle::range(std::vector<TableEntry>(expanded.entries().begin(), expanded.entries().end()), 578, 10577);
    ASSERT_TRUE(oracle_hit);
    EXPECT_EQ(oracle_hit->first, 0u);
    EXPECT_EQ(oracle_hit->second, 0u);
    EXPECT_EQ(cias_lookup_range(c, 578, 10240620), (OrdinalInterval{0, 1024}));
    EXPECT_EQ(cias_lookup_range(c, -1000, 20000000), (OrdinalInterval{0, 1024}));
    EXPECT_FALSE(cias_lookup_range(c, 0, 577));
    EXPECT_FALSE(cias_lookup_range(c, 10240621, 10240700));
    EXPECT_THROW(cias_lookup_range(c, 10, 9), ValidationError);
}

TEST(CiasLookup, EquivalentToTableLookup) {
    std::mt19937_64 rng(16);
    for (int t = 0; t < 300; ++t) {
        const auto entries = oracle::random_tiling(rng);
        const PartitionRangeTable table(entries);
        const auto c = compress(table);
        std::uniform_int_distribution<Key> kd(table.key_lo() - 20, table.key_hi() + 20);
        for (int q = 0; q < 40; ++q) {
            const Key k = kd(rng);
            ASSERT_EQ(cias_lookup(c, k), table_lookup(table, k));
            Key a = kd(rng), b = kd(rng);
            if (a > b) std::swap(a, b);
            ASSERT_EQ(cias_lookup_range(c, a, b), table_lookup_range(table, a, b));
        }
    }
}

TEST(CiasLookup, MonotoneOverSpan) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 50; ++t) {
        const PartitionRangeTable table(oracle::random_tiling(rng, 16));
        const auto c = compress(table);
        std::size_t prev = 0;
        for (Key k = c.key_lo(); k < c.key_hi(); ++k) {
            const auto o = cias_lookup(c, k);
            ASSERT_TRUE(o);
            ASSERT_GE(*o, prev);
            prev = *o;
        }
    }
}

TEST(CiasLookup, BoundaryExactness) {
    std::mt19937_64 rng(18);
    for (int t = 0; t < 200; ++t) {
        const PartitionRangeTable table(oracle::random_tiling(rng));
        const auto c = compress(table);
        for (std::size_t r = 0; r < c.runs().size(); ++r) {
            const Key b = c.asl()[r];
            EXPECT_EQ(cias_lookup(c, b), c.runs()[r].base_ordinal);
            if (r > 0) {
                EXPECT_EQ(cias_lookup(c, b - 1), c.runs()[r].base_ordinal - 1);
            }
        }
    }
}

std::uint64_t ceil_log2(std::uint64_t n) {
    std::uint64_t k = 0;
    while ((std::uint64_t{1} << k) < n) ++k;
    return k;
}

TEST(ComparisonBounds, TableAndCiasSearchesStayLogarithmic) {
    std::mt19937_64 rng(19);
    for (int t = 0; t < 200; ++t) {
        const PartitionRangeTable table(oracle::random_tiling(rng, 300));
        const auto c = compress(table);
        std::uniform_int_distribution<Key> kd(table.key_lo() - 5, table.key_hi() + 5);
        for (int q = 0; q < 30; ++q) {
            const Key k = kd(rng);
            ComparisonCounter tc, cc;
            table_lookup(table, k, &tc);
            cias_lookup(c, k, &cc);
            EXPECT_LE(tc.probes, ceil_log2(table.size()) + 1);
            EXPECT_LE(cc.probes, ceil_log2(c.runs().size() + 1) + 1);
        }
    }
}

TEST(IndexAccountedBytes, Model) {
    EXPECT_EQ(index_accounted_bytes(build_table(generate_synthetic(150, 0, 1, 10, 0))), 360u);
    EXPECT_EQ(index_accounted_bytes(two_run_cias()), 88u);
    for (std::size_t m : {10u, 1000u, 100000u}) {
        const auto ds = generate_synthetic(m, 0, 1, 1, 0);
        const auto t = build_table(ds);
        EXPECT_EQ(index_accounted_bytes(t), 24u * m);
        EXPECT_EQ(index_accounted_bytes(compress(t)), 48u);
    }
}

TEST(RangeIndexVariant, DispatchesToBothKinds) {
    const auto ds = generate_synthetic(25, 0, 1, 10, 3);
    const RangeIndex t = build_index(ds, IndexKind::table);
    const RangeIndex c = build_index(ds, IndexKind::cias);
    EXPECT_EQ(index_kind(t), IndexKind::table);
    EXPECT_EQ(index_kind(c), IndexKind::cias);
    EXPECT_EQ(index_partition_count(t), 3u);
    EXPECT_EQ(index_partition_count(c), 3u);
    EXPECT_EQ(lookup_range(t, 5, 12), lookup_range(c, 5, 12));
    EXPECT_EQ(lookup(t, 24), lookup(c, 24));
    EXPECT_EQ(index_key_hi(c), 25);
}

}  // namespace
}  // namespace oseba
