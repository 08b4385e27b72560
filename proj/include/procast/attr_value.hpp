#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace procast {

/// Milliseconds since the Unix epoch. A distinct type (not a plain double)
/// so XES round-trips write <date> back out instead of <float>.
struct TimestampMs {
  double ms = 0.0;
  friend bool operator==(const TimestampMs&, const TimestampMs&) = default;
};

/// The value of an event attribute: string, real number, boolean, timestamp,
/// or undefined. Undefined is what attribute access yields for a missing
/// attribute or an out-of-range accessor; it is never conflated with an
/// empty string or zero.
class AttrValue {
public:
  enum class Kind { Undefined, Str, Num, Bool, Timestamp };

  AttrValue() = default;  // Undefined

  static AttrValue str(std::string s) { return AttrValue(std::move(s)); }
  static AttrValue num(double v) { return AttrValue(v); }
  static AttrValue boolean(bool b) { return AttrValue(b); }
  static AttrValue timestamp(double epoch_ms) { return AttrValue(TimestampMs{epoch_ms}); }

  Kind kind() const { return static_cast<Kind>(v_.index()); }
  bool is_undefined() const { return kind() == Kind::Undefined; }

  /// Num and Timestamp are both numeric; timestamps take part in plain
  /// real arithmetic as their epoch milliseconds.
  bool is_numeric() const { return kind() == Kind::Num || kind() == Kind::Timestamp; }

  double number() const {
    if (kind() == Kind::Num) return std::get<double>(v_);
    return std::get<TimestampMs>(v_).ms;
  }
  const std::string& text() const { return std::get<std::string>(v_); }
  bool truth() const { return std::get<bool>(v_); }

  /// Strict identity: same variant and same payload. Timestamp(1000) and
  /// Num(1000) are *not* equal here (vocabularies and round-trip tests use
  /// this); formula evaluation uses its own numeric-aware comparison.
  bool operator==(const AttrValue&) const = default;

  /// Canonical display form, also used as the stable vocabulary key.
  std::string to_string() const;

  /// Kind-tagged canonical form; injective across kinds ("str:5" vs "num:5").
  std::string key() const;

private:
  explicit AttrValue(std::string s) : v_(std::move(s)) {}
  explicit AttrValue(double v) : v_(v) {}
  explicit AttrValue(bool b) : v_(b) {}
  explicit AttrValue(TimestampMs t) : v_(t) {}

  std::variant<std::monostate, std::string, double, bool, TimestampMs> v_;
};

/// Shortest round-trip decimal form (via std::to_chars); deterministic
/// across runs, used everywhere a double is written to a file.
std::string format_double(double v);

}  // namespace procast
