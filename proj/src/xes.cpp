#include "procast/xes.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <vector>

#include "procast/time_util.hpp"

namespace procast {

namespace {

// ---------------------------------------------------------------------------
// Minimal non-validating XML scanner, enough for the XES subset: elements,
// attributes, comments, PIs, DOCTYPE, character/entity references. Text
// content is skipped (XES carries data in attributes). Tracks line/column
// for error reporting.
// ---------------------------------------------------------------------------

struct XmlAttr {
  std::string name;
  std::string value;
};

struct XmlEvent {
  enum class Kind { StartElement, EndElement, Eof };
  Kind kind = Kind::Eof;
  std::string name;
  std::vector<XmlAttr> attrs;
  bool self_closing = false;
  std::size_t line = 0, col = 0;
};

class XmlScanner {
public:
  explicit XmlScanner(std::string text) : text_(std::move(text)) {
    // strip a UTF-8 BOM
    if (text_.size() >= 3 && static_cast<unsigned char>(text_[0]) == 0xEF &&
        static_cast<unsigned char>(text_[1]) == 0xBB &&
        static_cast<unsigned char>(text_[2]) == 0xBF) {
      pos_ = 3;
    }
  }

  XmlEvent next() {
    for (;;) {
      if (!open_elements_.empty() || !seen_root_) {
        skip_text();
      } else {
        skip_ws();
      }
      if (eof()) {
        if (!open_elements_.empty()) {
          fail("unexpected end of input, <" + open_elements_.back() + "> not closed");
        }
        return XmlEvent{};
      }
      if (peek() != '<') fail("unexpected character outside markup");
      std::size_t line = line_, col = col_;
      advance();  // '<'
      if (eof()) fail("unexpected end of input after '<'", line, col);
      char c = peek();
      if (c == '?') {
        skip_until("?>");
        continue;
      }
      if (c == '!') {
        advance();
        if (text_.compare(pos_, 2, "--") == 0) {
          skip_until("-->");
        } else {
          skip_doctype();
        }
        continue;
      }
      if (c == '/') {
        advance();
        std::string name = read_name();
        skip_ws();
        expect('>');
        if (open_elements_.empty() || open_elements_.back() != name) {
          fail("mismatched closing tag </" + name + ">", line, col);
        }
        open_elements_.pop_back();
        XmlEvent ev;
        ev.kind = XmlEvent::Kind::EndElement;
        ev.name = std::move(name);
        ev.line = line;
        ev.col = col;
        return ev;
      }
      // start tag
      XmlEvent ev;
      ev.kind = XmlEvent::Kind::StartElement;
      ev.name = read_name();
      ev.line = line;
      ev.col = col;
      for (;;) {
        skip_ws();
        if (eof()) fail("unexpected end of input in tag <" + ev.name + ">", line, col);
        if (peek() == '/') {
          advance();
          expect('>');
          ev.self_closing = true;
          break;
        }
        if (peek() == '>') {
          advance();
          open_elements_.push_back(ev.name);
          break;
        }
        XmlAttr a;
        a.name = read_name();
        skip_ws();
        expect('=');
        skip_ws();
        a.value = read_quoted();
        ev.attrs.push_back(std::move(a));
      }
      seen_root_ = true;
      return ev;
    }
  }

  std::size_t depth() const { return open_elements_.size(); }

private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail(msg, line_, col_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t line, std::size_t col) const {
    throw ParseError("XML: " + msg, line, col);
  }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n')) {
      advance();
    }
  }

  void skip_text() {
    while (!eof() && peek() != '<') advance();
  }

  void skip_until(std::string_view end) {
    while (!eof()) {
      if (text_.compare(pos_, end.size(), end) == 0) {
        for (std::size_t i = 0; i < end.size(); ++i) advance();
        return;
      }
      advance();
    }
    fail("unterminated '" + std::string(end) + "' construct");
  }

  void skip_doctype() {
    int bracket = 0;
    while (!eof()) {
      char c = peek();
      if (c == '[') ++bracket;
      if (c == ']') --bracket;
      if (c == '>' && bracket <= 0) {
        advance();
        return;
      }
      advance();
    }
    fail("unterminated DOCTYPE");
  }

  static bool name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == ':' || c == '_' || c == '-' || c == '.';
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (!eof() && name_char(peek())) advance();
    if (pos_ == start) fail("expected a name");
    return text_.substr(start, pos_ - start);
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  std::string read_quoted() {
    if (eof() || (peek() != '"' && peek() != '\'')) fail("expected a quoted value");
    char quote = peek();
    advance();
    std::string out;
    while (!eof() && peek() != quote) {
      if (peek() == '&') {
        out += read_entity();
      } else {
        out += peek();
        advance();
      }
    }
    if (eof()) fail("unterminated attribute value");
    advance();  // closing quote
    return out;
  }

  std::string read_entity() {
    std::size_t line = line_, col = col_;
    advance();  // '&'
    std::string name;
    while (!eof() && peek() != ';') {
      name += peek();
      advance();
      if (name.size() > 10) break;
    }
    if (eof() || peek() != ';') fail("malformed entity reference", line, col);
    advance();
    if (name == "amp") return "&";
    if (name == "lt") return "<";
    if (name == "gt") return ">";
    if (name == "quot") return "\"";
    if (name == "apos") return "'";
    if (!name.empty() && name[0] == '#') {
      long code = (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
                      ? std::strtol(name.c_str() + 2, nullptr, 16)
                      : std::strtol(name.c_str() + 1, nullptr, 10);
      if (code <= 0 || code > 0x10FFFF) fail("bad character reference", line, col);
      // encode as UTF-8
      std::string out;
      auto cp = static_cast<unsigned long>(code);
      if (cp < 0x80) {
        out += static_cast<char>(cp);
      } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      }
      return out;
    }
    fail("unknown entity &" + name + ";", line, col);
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1, col_ = 1;
  std::vector<std::string> open_elements_;
  bool seen_root_ = false;
};

const char* attr_of(const XmlEvent& ev, std::string_view name) {
  for (const auto& a : ev.attrs) {
    if (a.name == name) return a.value.c_str();
  }
  return nullptr;
}

bool parse_number(const std::string& s, double& out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end != begin && *end == '\0' && std::isfinite(out);
}

}  // namespace

XesParseResult parse_xes(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  XmlScanner scanner(buf.str());

  XesParseResult result;
  Trace* trace = nullptr;
  Event* event = nullptr;
  std::size_t trace_ordinal = 0;
  std::size_t event_ordinal = 0;
  std::size_t container_skip_depth = 0;  // inside an unsupported subtree

  for (;;) {
    XmlEvent ev = scanner.next();
    if (ev.kind == XmlEvent::Kind::Eof) break;

    if (container_skip_depth > 0) {
      if (ev.kind == XmlEvent::Kind::StartElement && !ev.self_closing) ++container_skip_depth;
      if (ev.kind == XmlEvent::Kind::EndElement) --container_skip_depth;
      continue;
    }

    if (ev.kind == XmlEvent::Kind::EndElement) {
      if (ev.name == "event") event = nullptr;
      if (ev.name == "trace") trace = nullptr;
      continue;
    }

    const std::string& name = ev.name;
    if (name == "log") continue;
    if (name == "trace") {
      ++trace_ordinal;
      event_ordinal = 0;
      result.log.traces.emplace_back("trace_" + std::to_string(trace_ordinal));
      trace = &result.log.traces.back();
      if (ev.self_closing) trace = nullptr;
      continue;
    }
    if (name == "event") {
      if (trace == nullptr) throw ParseError("XES: <event> outside <trace>", ev.line, ev.col);
      ++event_ordinal;
      trace->append(Event{});
      event = &trace->events().back();
      if (ev.self_closing) event = nullptr;
      continue;
    }

    const bool is_attr_kind = name == "string" || name == "date" || name == "int" ||
                              name == "float" || name == "boolean";
    if (!is_attr_kind) {
      // extensions, globals, classifiers, nested containers, ... out of subset
      if (name == "list" || name == "container") ++result.skipped_attributes;
      if (!ev.self_closing) ++container_skip_depth;
      continue;
    }

    const char* key = attr_of(ev, "key");
    const char* value = attr_of(ev, "value");
    if (key == nullptr || value == nullptr) {
      throw ParseError("XES: <" + name + "> without key/value", ev.line, ev.col);
    }

    AttrValue parsed;
    if (name == "string") {
      parsed = AttrValue::str(value);
    } else if (name == "date") {
      auto ms = parse_iso8601_ms(value);
      if (!ms) {
        throw ParseError("XES: bad ISO-8601 date '" + std::string(value) + "' for key '" + key +
                             "' (trace " + std::to_string(trace_ordinal) + ", event " +
                             std::to_string(event_ordinal) + ")",
                         ev.line, ev.col);
      }
      parsed = AttrValue::timestamp(*ms);
    } else if (name == "boolean") {
      std::string v = value;
      if (v == "true" || v == "TRUE" || v == "True") {
        parsed = AttrValue::boolean(true);
      } else if (v == "false" || v == "FALSE" || v == "False") {
        parsed = AttrValue::boolean(false);
      } else {
        ++result.skipped_attributes;
        if (!ev.self_closing) ++container_skip_depth;
        continue;
      }
    } else {  // int, float
      double num = 0;
      if (!parse_number(value, num)) {
        ++result.skipped_attributes;
        if (!ev.self_closing) ++container_skip_depth;
        continue;
      }
      parsed = AttrValue::num(num);
    }

    if (event != nullptr) {
      event->set(key, std::move(parsed));
    } else if (trace != nullptr) {
      if (std::string_view(key) == "concept:name" && parsed.kind() == AttrValue::Kind::Str) {
        trace->set_id(parsed.text());
      }
      // other trace-level attributes are outside the data model
    }
    // log-level attributes are ignored

    if (!ev.self_closing) ++container_skip_depth;  // skip any nested children
  }

  // trace ids must be unique for the temporal split and the deterministic
  // dataset ordering; later duplicates get a stable suffix
  std::unordered_set<std::string> seen;
  std::size_t ordinal = 0;
  for (auto& t : result.log.traces) {
    ++ordinal;
    if (!seen.insert(t.id()).second) {
      t.set_id(t.id() + "#" + std::to_string(ordinal));
      seen.insert(t.id());
      ++result.renamed_duplicate_ids;
    }
  }

  return result;
}

XesParseResult parse_xes_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open XES file: " + path);
  return parse_xes(in);
}

namespace {

void write_escaped(std::ostream& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '&': out << "&amp;"; break;
      case '<': out << "&lt;"; break;
      case '>': out << "&gt;"; break;
      case '"': out << "&quot;"; break;
      default: out << c;
    }
  }
}

void write_attr(std::ostream& out, const std::string& key, const AttrValue& v,
                const char* indent) {
  const char* tag = nullptr;
  std::string text;
  switch (v.kind()) {
    case AttrValue::Kind::Str:
      tag = "string";
      text = v.text();
      break;
    case AttrValue::Kind::Num:
      tag = "float";
      text = format_double(v.number());
      break;
    case AttrValue::Kind::Bool:
      tag = "boolean";
      text = v.truth() ? "true" : "false";
      break;
    case AttrValue::Kind::Timestamp:
      tag = "date";
      text = format_iso8601_ms(v.number());
      break;
    case AttrValue::Kind::Undefined:
      return;  // an absent attribute simply is not written
  }
  out << indent << '<' << tag << " key=\"";
  write_escaped(out, key);
  out << "\" value=\"";
  write_escaped(out, text);
  out << "\"/>\n";
}

}  // namespace

void write_xes(const EventLog& log, std::ostream& out) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<log xes.version=\"1.0\">\n";
  for (const auto& trace : log.traces) {
    out << "  <trace>\n";
    write_attr(out, "concept:name", AttrValue::str(trace.id()), "    ");
    for (const auto& event : trace.events()) {
      out << "    <event>\n";
      for (const auto& [key, value] : event.attributes()) {
        write_attr(out, key, value, "      ");
      }
      out << "    </event>\n";
    }
    out << "  </trace>\n";
  }
  out << "</log>\n";
}

void write_xes_file(const EventLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write XES file: " + path);
  write_xes(log, out);
}

}  // namespace procast
