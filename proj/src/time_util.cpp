#include "procast/time_util.hpp"

#include <cmath>
#include <cstdio>

namespace procast {

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);             // [0, 399]
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;            // [0, 146096]
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

namespace {

bool read_digits(std::string_view s, std::size_t& pos, int count, long long& out) {
  long long v = 0;
  for (int i = 0; i < count; ++i) {
    if (pos >= s.size() || s[pos] < '0' || s[pos] > '9') return false;
    v = v * 10 + (s[pos] - '0');
    ++pos;
  }
  out = v;
  return true;
}

}  // namespace

std::optional<double> parse_iso8601_ms(std::string_view s) {
  std::size_t pos = 0;
  long long year, month, day, hour = 0, minute = 0, second = 0;
  bool negative_year = false;
  if (pos < s.size() && s[pos] == '-') {
    negative_year = true;
    ++pos;
  }
  if (!read_digits(s, pos, 4, year)) return std::nullopt;
  if (negative_year) year = -year;
  if (pos >= s.size() || s[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_digits(s, pos, 2, month)) return std::nullopt;
  if (pos >= s.size() || s[pos] != '-') return std::nullopt;
  ++pos;
  if (!read_digits(s, pos, 2, day)) return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;

  double frac_ms = 0.0;
  long long offset_min = 0;
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, hour)) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, minute)) return std::nullopt;
    if (pos >= s.size() || s[pos] != ':') return std::nullopt;
    ++pos;
    if (!read_digits(s, pos, 2, second)) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;

    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      double scale = 100.0;  // first fractional digit is 100 ms
      bool any = false;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        frac_ms += (s[pos] - '0') * scale;
        scale /= 10.0;
        ++pos;
        any = true;
      }
      if (!any) return std::nullopt;
    }

    if (pos < s.size()) {
      char c = s[pos];
      if (c == 'Z' || c == 'z') {
        ++pos;
      } else if (c == '+' || c == '-') {
        ++pos;
        long long oh, om = 0;
        if (!read_digits(s, pos, 2, oh)) return std::nullopt;
        if (pos < s.size() && s[pos] == ':') ++pos;
        if (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
          if (!read_digits(s, pos, 2, om)) return std::nullopt;
        }
        offset_min = oh * 60 + om;
        if (c == '-') offset_min = -offset_min;
      } else {
        return std::nullopt;
      }
    }
  }
  if (pos != s.size()) return std::nullopt;

  const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                            static_cast<unsigned>(day));
  double ms = static_cast<double>(days) * kMsPerDay +
              static_cast<double>(hour) * 3'600'000.0 +
              static_cast<double>(minute) * 60'000.0 +
              static_cast<double>(second) * 1'000.0 + frac_ms -
              static_cast<double>(offset_min) * 60'000.0;
  return std::round(ms);
}

std::string format_iso8601_ms(double epoch_ms) {
  const double day_ms = kMsPerDay;
  double days_f = std::floor(epoch_ms / day_ms);
  double rem = epoch_ms - days_f * day_ms;
  auto day = static_cast<std::int64_t>(days_f);
  auto in_day = static_cast<std::int64_t>(std::llround(rem));
  if (in_day >= 86'400'000) {  // guard against rounding at the day boundary
    in_day -= 86'400'000;
    ++day;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(day, y, m, d);
  const int hh = static_cast<int>(in_day / 3'600'000);
  const int mm = static_cast<int>(in_day / 60'000 % 60);
  const int ss = static_cast<int>(in_day / 1'000 % 60);
  const int ms = static_cast<int>(in_day % 1'000);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02d.%03dZ",
                static_cast<long long>(y), m, d, hh, mm, ss, ms);
  return buf;
}

double ms_since_midnight(double epoch_ms) {
  double r = std::fmod(epoch_ms, kMsPerDay);
  if (r < 0) r += kMsPerDay;
  return r;
}

double ms_since_week_start(double epoch_ms) {
  // Epoch day zero (1970-01-01) was a Thursday; shift by 3 days so the
  // week origin lands on Monday 00:00 UTC.
  double shifted = epoch_ms + 3.0 * kMsPerDay;
  double r = std::fmod(shifted, kMsPerWeek);
  if (r < 0) r += kMsPerWeek;
  return r;
}

}  // namespace procast
