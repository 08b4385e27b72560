#include "procast/attr_value.hpp"

#include <charconv>
#include <cmath>

namespace procast {

std::string format_double(double v) {
  // integral values print as plain integers (to_chars' shortest form would
  // pick scientific notation for e.g. 600000); everything else keeps the
  // shortest round-trip form
  if (v == static_cast<double>(static_cast<long long>(v)) && std::fabs(v) < 9.0e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string AttrValue::to_string() const {
  switch (kind()) {
    case Kind::Undefined: return "undefined";
    case Kind::Str: return text();
    case Kind::Num: return format_double(number());
    case Kind::Bool: return truth() ? "true" : "false";
    case Kind::Timestamp: return format_double(number());
  }
  return {};
}

std::string AttrValue::key() const {
  switch (kind()) {
    case Kind::Undefined: return "undef:";
    case Kind::Str: return "str:" + text();
    case Kind::Num: return "num:" + format_double(number());
    case Kind::Bool: return truth() ? "bool:true" : "bool:false";
    case Kind::Timestamp: return "ts:" + format_double(number());
  }
  return {};
}

}  // namespace procast
