#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace procast {

// Calendar helpers, all UTC. Timestamps are real milliseconds since the
// Unix epoch throughout the library.

constexpr double kMsPerDay = 86'400'000.0;
constexpr double kMsPerWeek = 7.0 * kMsPerDay;

/// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d);

/// Inverse of days_from_civil.
void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d);

/// Parses ISO-8601 ("2011-04-03T09:45:12.000+02:00", fractional seconds and
/// zone offset optional, 'Z' or ±hh:mm or ±hhmm; ' ' accepted for 'T').
/// Returns epoch milliseconds rounded to the nearest integer, or nullopt.
std::optional<double> parse_iso8601_ms(std::string_view text);

/// Formats epoch milliseconds as "YYYY-MM-DDThh:mm:ss.mmmZ".
std::string format_iso8601_ms(double epoch_ms);

/// Milliseconds since UTC midnight of the day containing epoch_ms.
double ms_since_midnight(double epoch_ms);

/// Milliseconds since the most recent Monday 00:00 UTC.
double ms_since_week_start(double epoch_ms);

}  // namespace procast
