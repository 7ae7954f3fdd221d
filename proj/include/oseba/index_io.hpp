#ifndef OSEBA_INDEX_IO_HPP_
#define OSEBA_INDEX_IO_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "oseba/csv.hpp"
#include "oseba/range_index.hpp"

namespace oseba {

// Versioned JSON form of both index kinds:
//   {"kind":"table","version":1,"entries":[[ordinal,key_lo,key_hi],...]}
//   {"kind":"cias","version":1,"runs":[[start_key,stride,count,base_ordinal],...],"asl":[...]}
inline constexpr int kIndexFormatVersion = 1;

inline nlohmann::json index_to_json(const RangeIndex& index) {
    using nlohmann::json;
    json j;
    j["kind"] = std::string(index_kind_name(index_kind(index)));
    j["version"] = kIndexFormatVersion;
    if (const auto* t = std::get_if<PartitionRangeTable>(&index)) {
        json entries = json::array();
        for (const auto& e : t->entries()) entries.push_back(json::array({e.ordinal, e.key_lo, e.key_hi}));
        j["entries"] = std::move(entries);
    } else {
        const auto& c = std::get<Cias>(index);
        json runs = json::array();
        for (const auto& r : c.runs()) runs.push_back(json::array({r.start_key, r.stride, r.count, r.base_ordinal}));
        j["runs"] = std::move(runs);
        json asl = json::array();
        for (Key k : c.asl()) asl.push_back(k);
        j["asl"] = std::move(asl);
    }
    return j;
}

namespace detail {

inline const nlohmann::json& require_member(const nlohmann::json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw ValidationError(std::string("index JSON lacks '") + name + "'");
    return j.at(name);
}

inline std::int64_t json_int(const nlohmann::json& v, const char* what) {
    if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
            throw ValidationError(std::string(what) + " out of range");
        }
        return static_cast<std::int64_t>(u);
    }
    if (!v.is_number_integer()) throw ValidationError(std::string(what) + " must be an integer");
    return v.get<std::int64_t>();
}

inline std::uint64_t json_uint(const nlohmann::json& v, const char* what) {
    const auto i = json_int(v, what);
    if (i < 0) throw ValidationError(std::string(what) + " must be non-negative");
    return static_cast<std::uint64_t>(i);
}

inline const nlohmann::json& json_tuple(const nlohmann::json& v, std::size_t n, const char* what) {
    if (!v.is_array() || v.size() != n) {
        throw ValidationError(std::string(what) + " must be an array of " + std::to_string(n) + " integers");
    }
    return v;
}

}  // namespace detail

// Rebuilds an index, validating every invariant of its kind.
inline RangeIndex index_from_json(const nlohmann::json& j) {
    const auto& kind_v = detail::require_member(j, "kind");
    const auto& version_v = detail::require_member(j, "version");
    if (!kind_v.is_string()) throw ValidationError("index 'kind' must be a string");
    if (detail::json_int(version_v, "version") != kIndexFormatVersion) {
        throw ValidationError("unsupported index format version");
    }
    const auto kind = parse_index_kind(kind_v.get<std::string>());
    if (!kind) throw ValidationError("unknown index kind '" + kind_v.get<std::string>() + "'");

    if (*kind == IndexKind::table) {
        const auto& arr = detail::require_member(j, "entries");
        if (!arr.is_array()) throw ValidationError("'entries' must be an array");
        std::vector<TableEntry> entries;
        entries.reserve(arr.size());
        for (const auto& e : arr) {
            detail::json_tuple(e, 3, "table entry");
            entries.push_back({static_cast<std::size_t>(detail::json_uint(e[0], "ordinal")),
                               detail::json_int(e[1], "key_lo"), detail::json_int(e[2], "key_hi")});
        }
        return PartitionRangeTable(std::move(entries));
    }

    const auto& runs_v = detail::require_member(j, "runs");
    const auto& asl_v = detail::require_member(j, "asl");
    if (!runs_v.is_array() || !asl_v.is_array()) throw ValidationError("'runs' and 'asl' must be arrays");
    std::vector<Run> runs;
    runs.reserve(runs_v.size());
    for (const auto& r : runs_v) {
        detail::json_tuple(r, 4, "CIAS run");
        runs.push_back({detail::json_int(r[0], "start_key"), detail::json_int(r[1], "stride"),
                        detail::json_uint(r[2], "count"),
                        static_cast<std::size_t>(detail::json_uint(r[3], "base_ordinal"))});
    }
    std::vector<Key> asl;
    asl.reserve(asl_v.size());
    for (const auto& k : asl_v) asl.push_back(detail::json_int(k, "asl key"));
    return Cias(std::move(runs), std::move(asl));
}

inline std::string serialize_index(const RangeIndex& index) { return index_to_json(index).dump() + "\n"; }

inline RangeIndex parse_index(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed index JSON: ") + e.what());
    }
    return index_from_json(j);
}

inline void save_index(const RangeIndex& index, const std::filesystem::path& path) {
    csv::write_file(path, serialize_index(index));
}

inline RangeIndex load_index(const std::filesystem::path& path) { return parse_index(csv::read_file(path)); }

}  // namespace oseba

#endif  // OSEBA_INDEX_IO_HPP_
