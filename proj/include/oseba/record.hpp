#ifndef OSEBA_RECORD_HPP_
#define OSEBA_RECORD_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "oseba/error.hpp"

namespace oseba {

using Key = std::int64_t;

// One time-series sample.
struct Record {
    Key key = 0;
    double temperature = 0.0;     // degrees C
    double humidity = 0.0;        // percent
    double wind_speed = 0.0;      // m/s
    double wind_direction = 0.0;  // degrees

    friend bool operator==(const Record&, const Record&) = default;
};

// Accounting width of one record: key plus four 8-byte measurements.
inline constexpr std::uint64_t kRecordWidthBytes = 40;

enum class Field { temperature, humidity, wind_speed, wind_direction };

inline constexpr std::array<Field, 4> kAllFields = {Field::temperature, Field::humidity,
                                                    Field::wind_speed, Field::wind_direction};

constexpr std::string_view field_name(Field f) noexcept {
    switch (f) {
        case Field::temperature: return "temperature";
        case Field::humidity: return "humidity";
        case Field::wind_speed: return "wind_speed";
        case Field::wind_direction: return "wind_direction";
    }
    return "";
}

inline std::optional<Field> parse_field(std::string_view name) noexcept {
    for (Field f : kAllFields) {
        if (field_name(f) == name) return f;
    }
    return std::nullopt;
}

inline Field field_from_name(std::string_view name) {
    if (auto f = parse_field(name)) return *f;
    throw ValidationError("unknown measurement field '" + std::string(name) + "'");
}

constexpr double field_value(const Record& r, Field f) noexcept {
    switch (f) {
        case Field::temperature: return r.temperature;
        case Field::humidity: return r.humidity;
        case Field::wind_speed: return r.wind_speed;
        case Field::wind_direction: return r.wind_direction;
    }
    return 0.0;
}

inline bool measurements_finite(const Record& r) noexcept {
    return std::isfinite(r.temperature) && std::isfinite(r.humidity) &&
           std::isfinite(r.wind_speed) && std::isfinite(r.wind_direction);
}

// Closed key interval [lo, hi] used for queries and analysis periods.
struct KeyRange {
    Key lo = 0;
    Key hi = 0;

    constexpr bool contains(Key k) const noexcept { return lo <= k && k <= hi; }
    friend bool operator==(const KeyRange&, const KeyRange&) = default;
};

inline void require_valid_range(Key lo, Key hi) {
    if (lo > hi) {
        throw ValidationError("invalid key range: lo (" + std::to_string(lo) + ") > hi (" +
                              std::to_string(hi) + ")");
    }
}

}  // namespace oseba

#endif  // OSEBA_RECORD_HPP_
