#ifndef OSEBA_CSV_HPP_
#define OSEBA_CSV_HPP_

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "oseba/dataset.hpp"
#include "oseba/error.hpp"
#include "oseba/record.hpp"

namespace oseba::csv {

inline constexpr std::string_view kHeader = "time,temperature,humidity,wind_speed,wind_direction";
inline constexpr std::array<std::string_view, 5> kColumns = {"time", "temperature", "humidity", "wind_speed",
                                                             "wind_direction"};

// Shortest decimal that round-trips, never in exponent form.
inline void append_double(std::string& out, double v) {
    std::array<char, 512> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    if (ec != std::errc{}) throw ValidationError("cannot format value");
    out.append(buf.data(), end);
}

inline std::string format_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

inline void append_row(std::string& out, const Record& r) {
    std::array<char, 24> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), r.key);
    out.append(buf.data(), end);
    for (double v : {r.temperature, r.humidity, r.wind_speed, r.wind_direction}) {
        out.push_back(',');
        append_double(out, v);
    }
    out.push_back('\n');
}

// Parses canonical CSV text into records in file order. Lines are numbered
// from 1 (the header). A single trailing newline is allowed; a CR before the
// LF is tolerated.
inline std::vector<Record> parse_records(std::string_view text) {
    std::vector<Record> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (!saw_header) {
            if (line != kHeader) {
                throw ParseError(line_no, "header", "expected header '" + std::string(kHeader) + "'");
            }
            saw_header = true;
            continue;
        }
        if (line.empty()) throw ParseError(line_no, "time", "empty row");

        Record r;
        std::size_t col = 0;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view cell =
                line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            if (col >= kColumns.size()) throw ParseError(line_no, "-", "too many columns");
            const std::string column(kColumns[col]);
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (col == 0) {
                auto [p, ec] = std::from_chars(first, last, r.key);
                if (ec != std::errc{} || p != last || cell.empty()) {
                    throw ParseError(line_no, column, "expected a base-10 integer, got '" + std::string(cell) + "'");
                }
            } else {
                double v = 0.0;
                auto [p, ec] = std::from_chars(first, last, v);
                if (ec != std::errc{} || p != last || cell.empty()) {
                    throw ParseError(line_no, column, "expected a decimal number, got '" + std::string(cell) + "'");
                }
                if (!std::isfinite(v)) throw ParseError(line_no, column, "non-finite value '" + std::string(cell) + "'");
                switch (col) {
                    case 1: r.temperature = v; break;
                    case 2: r.humidity = v; break;
                    case 3: r.wind_speed = v; break;
                    default: r.wind_direction = v; break;
                }
            }
            ++col;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (col != kColumns.size()) {
            throw ParseError(line_no, std::string(kColumns[col]), "missing column");
        }
        records.push_back(r);
    }
    if (!saw_header) throw ValidationError("empty CSV input");
    if (records.empty()) throw ValidationError("CSV contains a header but no data rows");
    return records;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return std::move(ss).str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

// Unsorted input is stably sorted by key; duplicate keys are rejected.
inline Dataset parse_dataset(std::string_view text, std::size_t capacity) {
    return dataset_from_records(parse_records(text), capacity);
}

inline Dataset ingest_csv(const std::filesystem::path& path, std::size_t capacity) {
    return parse_dataset(read_file(path), capacity);
}

inline std::string to_csv(const Dataset& dataset) {
    std::string out;
    out.reserve(dataset.record_count() * 96 + kHeader.size() + 1);
    out.append(kHeader);
    out.push_back('\n');
    dataset.for_each_record([&](const Record& r) { append_row(out, r); });
    return out;
}

inline void export_csv(const Dataset& dataset, std::ostream& os) {
    const std::string text = to_csv(dataset);
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline void export_csv(const Dataset& dataset, const std::filesystem::path& path) {
    write_file(path, to_csv(dataset));
}

}  // namespace oseba::csv

#endif  // OSEBA_CSV_HPP_
