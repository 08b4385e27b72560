#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "procast/event_log.hpp"

namespace procast {

enum class CsvColumnType { Str, Num, Timestamp, Bool };

/// Column mapping for tabular event logs. One row = one event; rows are
/// grouped into traces by the trace-id column (group order = first
/// appearance in the file) and ordered inside a group by timestamp_column
/// when set, else by file order.
struct CsvMapping {
  char delimiter = ',';
  std::string trace_id_column;
  std::map<std::string, CsvColumnType> columns;  // undeclared columns default to Str
  std::optional<std::string> timestamp_column;
  /// "iso8601", "epoch_ms", or a std::get_time pattern (interpreted as UTC).
  std::string timestamp_format = "iso8601";
};

struct CsvParseResult {
  EventLog log;
  std::size_t warnings = 0;       // unparseable cells mapped to Undefined
  std::size_t rejected_rows = 0;  // rows without a usable trace id
};

/// Throws ParseError when the header is missing or lacks a declared column,
/// or on structurally broken CSV (unterminated quote). Dirty cells degrade
/// to Undefined and are counted, never fatal.
CsvParseResult parse_csv_log(std::istream& in, const CsvMapping& mapping);
CsvParseResult parse_csv_log_file(const std::string& path, const CsvMapping& mapping);

}  // namespace procast
