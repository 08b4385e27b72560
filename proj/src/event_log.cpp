#include "procast/event_log.hpp"

namespace procast {

namespace {
const AttrValue kUndefined{};
}

const AttrValue& Event::attr(std::string_view name) const {
  for (const auto& [n, v] : attrs_) {
    if (n == name) return v;
  }
  return kUndefined;
}

bool Event::has(std::string_view name) const {
  for (const auto& [n, v] : attrs_) {
    if (n == name) return true;
  }
  return false;
}

void Event::set(std::string name, AttrValue value) {
  for (auto& [n, v] : attrs_) {
    if (n == name) {
      v = std::move(value);
      return;
    }
  }
  attrs_.emplace_back(std::move(name), std::move(value));
}

const Event& Trace::at(std::size_t i) const {
  if (i < 1 || i > events_.size()) {
    throw DomainError("event index " + std::to_string(i) + " out of range 1.." +
                      std::to_string(events_.size()) + " in trace '" + id_ + "'");
  }
  return events_[i - 1];
}

std::size_t EventLog::total_events() const {
  std::size_t n = 0;
  for (const auto& t : traces) n += t.size();
  return n;
}

TracePrefix::TracePrefix(const Trace& trace, std::size_t k) : trace_(&trace), k_(k) {
  if (k < 1 || k > trace.size()) {
    throw DomainError("prefix length " + std::to_string(k) + " out of range 1.." +
                      std::to_string(trace.size()) + " for trace '" + trace.id() + "'");
  }
}

}  // namespace procast
