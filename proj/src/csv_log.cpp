#include "procast/csv_log.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <vector>

#include "procast/time_util.hpp"

namespace procast {

namespace {

// RFC-4180-ish reader: quoted fields may contain the delimiter, doubled
// quotes and newlines. Returns false at end of input.
bool read_record(std::istream& in, char delim, std::vector<std::string>& fields,
                 std::size_t& line_no) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;

  std::string field;
  bool in_quotes = false;
  bool any = false;
  ++line_no;

  while (c != EOF) {
    char ch = static_cast<char>(c);
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line_no;
        field += ch;
      }
    } else if (ch == '"' && field.empty()) {
      in_quotes = true;
    } else if (ch == delim) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field += ch;
    }
    c = in.get();
  }
  if (in_quotes) throw ParseError("CSV: unterminated quoted field", line_no);
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::optional<double> parse_timestamp_cell(const std::string& cell, const std::string& format) {
  if (format == "iso8601") return parse_iso8601_ms(cell);
  if (format == "epoch_ms") {
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') return std::nullopt;
    return v;
  }
  // std::get_time pattern, interpreted as UTC
  std::tm tm{};
  std::istringstream ss(cell);
  ss >> std::get_time(&tm, format.c_str());
  if (ss.fail()) return std::nullopt;
  std::int64_t days = days_from_civil(tm.tm_year + 1900, static_cast<unsigned>(tm.tm_mon + 1),
                                      static_cast<unsigned>(tm.tm_mday));
  return static_cast<double>(days) * kMsPerDay + tm.tm_hour * 3'600'000.0 +
         tm.tm_min * 60'000.0 + tm.tm_sec * 1'000.0;
}

AttrValue parse_cell(const std::string& cell, CsvColumnType type, const CsvMapping& mapping,
                     std::size_t& warnings) {
  if (cell.empty()) {
    if (type != CsvColumnType::Str) ++warnings;
    return AttrValue{};
  }
  switch (type) {
    case CsvColumnType::Str:
      return AttrValue::str(cell);
    case CsvColumnType::Num: {
      const char* begin = cell.c_str();
      char* end = nullptr;
      double v = std::strtod(begin, &end);
      if (end == begin || *end != '\0' || !std::isfinite(v)) {
        ++warnings;
        return AttrValue{};
      }
      return AttrValue::num(v);
    }
    case CsvColumnType::Bool: {
      std::string lower = cell;
      std::transform(lower.begin(), lower.end(), lower.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      if (lower == "true" || lower == "1" || lower == "yes") return AttrValue::boolean(true);
      if (lower == "false" || lower == "0" || lower == "no") return AttrValue::boolean(false);
      ++warnings;
      return AttrValue{};
    }
    case CsvColumnType::Timestamp: {
      auto ms = parse_timestamp_cell(cell, mapping.timestamp_format);
      if (!ms) {
        ++warnings;
        return AttrValue{};
      }
      return AttrValue::timestamp(*ms);
    }
  }
  return AttrValue{};
}

}  // namespace

CsvParseResult parse_csv_log(std::istream& in, const CsvMapping& mapping) {
  std::size_t line_no = 0;
  std::vector<std::string> header;
  if (!read_record(in, mapping.delimiter, header, line_no)) {
    throw ParseError("CSV: missing header row", 1);
  }

  auto column_index = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };

  auto id_col = column_index(mapping.trace_id_column);
  if (!id_col) {
    throw ParseError("CSV: header has no trace-id column '" + mapping.trace_id_column + "'", 1);
  }
  for (const auto& [name, type] : mapping.columns) {
    (void)type;
    if (!column_index(name)) {
      throw ParseError("CSV: header has no declared column '" + name + "'", 1);
    }
  }
  if (mapping.timestamp_column && !column_index(*mapping.timestamp_column)) {
    throw ParseError("CSV: header has no timestamp column '" + *mapping.timestamp_column + "'",
                     1);
  }

  std::vector<CsvColumnType> types(header.size(), CsvColumnType::Str);
  for (std::size_t i = 0; i < header.size(); ++i) {
    auto it = mapping.columns.find(header[i]);
    if (it != mapping.columns.end()) types[i] = it->second;
  }

  CsvParseResult result;
  std::map<std::string, std::size_t> trace_index;  // id -> position in log
  std::vector<std::string> fields;
  while (read_record(in, mapping.delimiter, fields, line_no)) {
    if (*id_col >= fields.size() || fields[*id_col].empty()) {
      ++result.rejected_rows;
      ++result.warnings;
      continue;
    }
    const std::string& trace_id = fields[*id_col];
    auto [it, inserted] = trace_index.emplace(trace_id, result.log.traces.size());
    if (inserted) result.log.traces.emplace_back(trace_id);
    Trace& trace = result.log.traces[it->second];

    Event event;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i == *id_col) continue;
      const std::string cell = i < fields.size() ? fields[i] : std::string{};
      AttrValue value = parse_cell(cell, types[i], mapping, result.warnings);
      if (!value.is_undefined()) event.set(header[i], std::move(value));
    }
    trace.append(std::move(event));
  }

  if (mapping.timestamp_column) {
    const std::string& ts = *mapping.timestamp_column;
    for (auto& trace : result.log.traces) {
      std::stable_sort(trace.events().begin(), trace.events().end(),
                       [&](const Event& a, const Event& b) {
                         const AttrValue& ta = a.attr(ts);
                         const AttrValue& tb = b.attr(ts);
                         // events without a timestamp keep file order, after all dated ones
                         if (ta.is_undefined()) return false;
                         if (tb.is_undefined()) return true;
                         return ta.number() < tb.number();
                       });
    }
  }

  return result;
}

CsvParseResult parse_csv_log_file(const std::string& path, const CsvMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open CSV file: " + path);
  return parse_csv_log(in, mapping);
}

}  // namespace procast
