#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "procast/attr_value.hpp"
#include "procast/errors.hpp"

namespace procast {

/// One event: a map from attribute names to values, preserving the order
/// attributes appeared in the source. Names are unique within an event.
class Event {
public:
  /// Total: returns Undefined for an absent attribute.
  const AttrValue& attr(std::string_view name) const;

  bool has(std::string_view name) const;

  /// Inserts or replaces; keeps first-seen position on replace.
  void set(std::string name, AttrValue value);

  const std::vector<std::pair<std::string, AttrValue>>& attributes() const { return attrs_; }

  bool operator==(const Event&) const = default;

private:
  std::vector<std::pair<std::string, AttrValue>> attrs_;
};

/// A finite, non-empty ordered sequence of events. Indexing is 1-based
/// everywhere in the public API, matching how rule text addresses events.
class Trace {
public:
  Trace() = default;
  explicit Trace(std::string id) : id_(std::move(id)) {}

  const std::string& id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }

  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

  /// 1-based access; throws DomainError when i is outside 1..size().
  const Event& at(std::size_t i) const;

  void append(Event e) { events_.push_back(std::move(e)); }

  const std::vector<Event>& events() const { return events_; }
  std::vector<Event>& events() { return events_; }

  bool operator==(const Trace&) const = default;

private:
  std::string id_;
  std::vector<Event> events_;
};

struct EventLog {
  std::vector<Trace> traces;

  std::size_t total_events() const;
  bool operator==(const EventLog&) const = default;
};

/// The first k events of a trace. Keeps a reference to the whole parent
/// trace: rule conditions quantify over 1..|trace|, not 1..k, and the
/// special indices are curr = k and last = |trace|.
class TracePrefix {
public:
  TracePrefix(const Trace& trace, std::size_t k);

  const Trace& trace() const { return *trace_; }
  std::size_t curr() const { return k_; }
  std::size_t last() const { return trace_->size(); }

  /// 1-based into the full parent trace.
  const Event& at(std::size_t i) const { return trace_->at(i); }

private:
  const Trace* trace_;
  std::size_t k_;
};

/// Spec'd accessor form of Event::attr.
inline const AttrValue& attr(const Event& e, std::string_view name) { return e.attr(name); }

/// Builds the k-length prefix; throws DomainError unless 1 <= k <= |trace|.
inline TracePrefix prefix(const Trace& t, std::size_t k) { return TracePrefix(t, k); }

}  // namespace procast
