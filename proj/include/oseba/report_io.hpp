#ifndef OSEBA_REPORT_IO_HPP_
#define OSEBA_REPORT_IO_HPP_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "oseba/analysis.hpp"
#include "oseba/bench.hpp"
#include "oseba/csv.hpp"

namespace oseba {

// JSON forms of analysis results and benchmark reports. Key order is fixed
// by nlohmann's sorted object map, so equal values always dump to identical
// bytes.

inline nlohmann::json to_json(const StatsSummary& s) {
    return {{"count", s.count}, {"max", s.max}, {"mean", s.mean}, {"stddev", s.stddev}};
}

inline StatsSummary stats_from_json(const nlohmann::json& j) {
    return StatsSummary{j.at("count").get<std::uint64_t>(), j.at("max").get<double>(), j.at("mean").get<double>(),
                        j.at("stddev").get<double>()};
}

// Pointwise differences are left out above this many entries unless asked for.
inline constexpr std::size_t kPointwiseInlineLimit = 10000;

inline nlohmann::json to_json(const DistanceReport& d, bool with_pointwise = false) {
    nlohmann::json j = {{"n", d.n}, {"euclidean", d.euclidean}, {"mean_abs", d.mean_abs}, {"truncated", d.truncated}};
    if (with_pointwise || d.pointwise.size() <= kPointwiseInlineLimit) j["pointwise"] = d.pointwise;
    return j;
}

inline nlohmann::json to_json(const KeyRange& r) { return nlohmann::json::array({r.lo, r.hi}); }

inline nlohmann::json to_json(const SplitAssignment& s) {
    auto list = [](const std::vector<KeyRange>& rs) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& r : rs) a.push_back(to_json(r));
        return a;
    };
    return {{"seed", s.seed}, {"training", list(s.training)}, {"tests", list(s.tests)},
            {"validation", list(s.validation)}};
}

inline nlohmann::json to_json(const EventReport& e) {
    return {{"before", to_json(e.before)},       {"after", to_json(e.after)},
            {"before_count", e.before_count},    {"after_count", e.after_count},
            {"range_min", e.range_min},          {"range_max", e.range_max},
            {"before_hist", e.before_hist},      {"after_hist", e.after_hist},
            {"l1_distance", e.l1_distance}};
}

inline nlohmann::json to_json(const std::vector<AveragePoint>& points) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : points) a.push_back(nlohmann::json::array({p.key, p.value}));
    return a;
}

namespace bench {

inline nlohmann::json to_json(const WorkloadSpec& w) {
    nlohmann::json phases = nlohmann::json::array();
    for (const auto& p : w.phases) phases.push_back({{"lo", p.lo}, {"hi", p.hi}, {"label", p.label}});
    return {{"field", std::string(field_name(w.field))}, {"phases", std::move(phases)}};
}

// {"field":"temperature","phases":[{"lo":..,"hi":..,"label":".."}, ...]}
inline WorkloadSpec workload_from_json(const nlohmann::json& j) {
    try {
        WorkloadSpec w;
        w.field = field_from_name(j.at("field").get<std::string>());
        for (const auto& p : j.at("phases")) {
            w.phases.push_back({p.at("lo").get<Key>(), p.at("hi").get<Key>(),
                                p.contains("label") ? p.at("label").get<std::string>()
                                                    : "period-" + std::to_string(w.phases.size() + 1)});
        }
        validate_workload(w);
        return w;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed workload: ") + e.what());
    }
}

inline WorkloadSpec load_workload(const std::filesystem::path& path) {
    const auto text = csv::read_file(path);
    try {
        return workload_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed workload JSON: ") + e.what());
    }
}

inline nlohmann::json to_json(const MetricsReport& r) {
    nlohmann::json phases = nlohmann::json::array();
    for (const auto& p : r.per_phase) {
        phases.push_back({{"label", p.label},
                          {"lo", p.lo},
                          {"hi", p.hi},
                          {"selected_records", p.selected_records},
                          {"accounted_bytes", p.accounted_bytes},
                          {"partition_scans_cum", p.partition_scans_cum},
                          {"wall_seconds_cum", p.wall_seconds_cum},
                          {"stats", p.stats ? oseba::to_json(*p.stats) : nlohmann::json(nullptr)}});
    }
    return {{"mode", std::string(mode_name(r.mode))},
            {"index_kind", r.index_kind ? nlohmann::json(std::string(index_kind_name(*r.index_kind)))
                                        : nlohmann::json(nullptr)},
            {"field", std::string(field_name(r.field))},
            {"partition_count", r.partition_count},
            {"raw_bytes", r.raw_bytes},
            {"index_bytes", r.index_bytes},
            {"per_phase", std::move(phases)}};
}

inline MetricsReport report_from_json(const nlohmann::json& j) {
    try {
        MetricsReport r;
        const auto mode = parse_mode(j.at("mode").get<std::string>());
        if (!mode) throw ValidationError("unknown report mode");
        r.mode = *mode;
        if (!j.at("index_kind").is_null()) {
            const auto k = parse_index_kind(j.at("index_kind").get<std::string>());
            if (!k) throw ValidationError("unknown index kind in report");
            r.index_kind = *k;
        }
        r.field = field_from_name(j.at("field").get<std::string>());
        r.partition_count = j.at("partition_count").get<std::uint64_t>();
        r.raw_bytes = j.at("raw_bytes").get<std::uint64_t>();
        r.index_bytes = j.at("index_bytes").get<std::uint64_t>();
        for (const auto& p : j.at("per_phase")) {
            PhaseMetrics pm;
            pm.label = p.at("label").get<std::string>();
            pm.lo = p.at("lo").get<Key>();
            pm.hi = p.at("hi").get<Key>();
            pm.selected_records = p.at("selected_records").get<std::uint64_t>();
            pm.accounted_bytes = p.at("accounted_bytes").get<std::uint64_t>();
            pm.partition_scans_cum = p.at("partition_scans_cum").get<std::uint64_t>();
            pm.wall_seconds_cum = p.at("wall_seconds_cum").get<double>();
            if (!p.at("stats").is_null()) pm.stats = stats_from_json(p.at("stats"));
            r.per_phase.push_back(std::move(pm));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed metrics report: ") + e.what());
    }
}

inline nlohmann::json to_json(const Comparison& c) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json phases = nlohmann::json::array();
    for (const auto& p : c.per_phase) {
        phases.push_back({{"label", p.label},
                          {"memory_ratio", opt(p.memory_ratio)},
                          {"scan_ratio", opt(p.scan_ratio)},
                          {"speedup", opt(p.speedup)},
                          {"stats_match", p.stats_match}});
    }
    return {{"all_stats_match", c.all_stats_match}, {"per_phase", std::move(phases)}};
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

inline constexpr std::string_view kReportCsvHeader =
    "mode,phase,label,accounted_bytes,partition_scans_cum,wall_seconds_cum,max,mean,stddev";

// One row per phase. Phases without stats leave max/mean/stddev empty.
inline std::string report_to_csv(const MetricsReport& r) {
    std::string out(kReportCsvHeader);
    out += '\n';
    for (std::size_t i = 0; i < r.per_phase.size(); ++i) {
        const auto& p = r.per_phase[i];
        out += mode_name(r.mode);
        out += ',' + std::to_string(i + 1) + ',' + csv_escape(p.label) + ',' + std::to_string(p.accounted_bytes) + ',' +
               std::to_string(p.partition_scans_cum) + ',' + csv::format_double(p.wall_seconds_cum) + ',';
        if (p.stats) {
            out += csv::format_double(p.stats->max) + ',' + csv::format_double(p.stats->mean) + ',' +
                   csv::format_double(p.stats->stddev);
        } else {
            out += ",,";
        }
        out += '\n';
    }
    return out;
}

enum class ReportFormat { json, csv };

inline std::string render_report(const MetricsReport& r, ReportFormat format) {
    return format == ReportFormat::json ? to_json(r).dump(2) + "\n" : report_to_csv(r);
}

inline void emit_report(const MetricsReport& r, ReportFormat format, const std::filesystem::path& path) {
    csv::write_file(path, render_report(r, format));
}

inline MetricsReport parse_report(std::string_view text) {
    try {
        return report_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("malformed report JSON: ") + e.what());
    }
}

}  // namespace bench
}  // namespace oseba

#endif  // OSEBA_REPORT_IO_HPP_
