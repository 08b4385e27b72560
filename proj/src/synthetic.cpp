#include "procast/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "procast/errors.hpp"

namespace procast {

EventLog generate_synthetic_log(const SyntheticParams& params) {
  if (params.trace_length < 4) throw ConfigError("synthetic trace_length must be at least 4");
  if (params.traces < 1) throw ConfigError("synthetic log needs at least one trace");
  if (params.pingpong_fraction < 0.0 || params.pingpong_fraction > 1.0) {
    throw ConfigError("pingpong_fraction must lie in [0,1]");
  }

  const std::size_t n = params.trace_length;
  int digits = 1;
  for (std::size_t v = params.traces; v >= 10; v /= 10) ++digits;
  if (digits < 4) digits = 4;  // zero-padded ids keep lexicographic = temporal order

  EventLog log;
  log.traces.reserve(params.traces);

  for (std::size_t t = 1; t <= params.traces; ++t) {
    // Bresenham-style spread of the planted fate through the log, so both
    // split sides see both outcomes at any fraction.
    const bool pingpong =
        std::floor(params.pingpong_fraction * static_cast<double>(t)) >
        std::floor(params.pingpong_fraction * static_cast<double>(t - 1));
    const bool near_miss = !pingpong && (t % 4 == 1);

    char id[32];
    std::snprintf(id, sizeof(id), "T%0*zu", digits, t);
    Trace trace{id};

    const double start =
        params.start_ms + static_cast<double>(t - 1) * params.trace_gap_ms;

    for (std::size_t i = 1; i <= n; ++i) {
      Event e;
      std::string activity;
      if (i == 1) {
        activity = "Accepted";
      } else if (i == 2) {
        activity = pingpong ? "Escalate" : "Review";
      } else if (i == n) {
        activity = "Closed";
      } else if (i == n - 1 && near_miss) {
        activity = "Queued";
      } else {
        activity = "Work";
      }

      // the group handover happens on the last transition
      const bool second_team = (pingpong || near_miss) && i == n;
      const std::string group = second_team ? "G2" : "G1";
      const std::string resource = "R" + std::to_string(1 + (t + i) % 3);

      e.set("concept:name", AttrValue::str(activity));
      e.set("org:group", AttrValue::str(group));
      e.set("org:resource", AttrValue::str(resource));
      e.set("lifecycle:transition", AttrValue::str(i == n ? "complete" : "start"));
      e.set("time:timestamp",
            AttrValue::timestamp(start + static_cast<double>(i - 1) * params.step_ms));
      trace.append(std::move(e));
    }
    log.traces.push_back(std::move(trace));
  }
  return log;
}

}  // namespace procast
