#pragma once

#include <iosfwd>
#include <string>

#include "procast/event_log.hpp"

namespace procast {

struct XesParseResult {
  EventLog log;
  /// Attribute elements of a kind outside the supported subset
  /// (string/date/int/float/boolean) or with unusable values, skipped.
  std::size_t skipped_attributes = 0;
  /// Trace ids must be unique; later duplicates get a "#<ordinal>" suffix.
  std::size_t renamed_duplicate_ids = 0;
};

/// Parses the XES subset: log/trace/event elements with string, date, int,
/// float and boolean attribute children carrying key/value XML attributes.
/// Document order of <event> children is the event order. A trace's
/// concept:name becomes its id (synthetic "trace_<ordinal>" when absent).
/// Throws ParseError with line/column on malformed XML, and on a <date>
/// whose value is not ISO-8601 (naming the trace and event ordinal).
XesParseResult parse_xes(std::istream& in);
XesParseResult parse_xes_file(const std::string& path);

/// Writes the same subset back out; parse_xes(write_xes(log)) == log.
void write_xes(const EventLog& log, std::ostream& out);
void write_xes_file(const EventLog& log, const std::string& path);

}  // namespace procast
