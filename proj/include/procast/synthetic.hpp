#pragma once

#include "procast/event_log.hpp"

namespace procast {

/// Parameters for the bundled synthetic customer-support log. The generator
/// is fully deterministic (no RNG): trace t starts one day after trace t-1,
/// consecutive events are exactly step_ms apart, and the trace's fate is a
/// function of its ordinal.
///
/// pingpong_fraction of the traces (spread evenly through the log) plant a
/// support-team handover at the end of the trace: org:group changes on the
/// last transition while the activity there is not "Queued". Among the
/// remaining traces, every fourth one is a near miss (the group changes but
/// the activity at the handover is "Queued"); the rest keep one group
/// throughout. The second event's activity ("Escalate" vs "Review") marks
/// the planted fate, so the outcome is learnable from any prefix with
/// k >= 2.
struct SyntheticParams {
  std::size_t traces = 200;
  std::size_t trace_length = 8;    // >= 4
  double pingpong_fraction = 0.5;  // fraction of traces with the handover
  double start_ms = 1293868800000.0;  // 2011-01-01T08:00:00Z
  double trace_gap_ms = 86'400'000.0;
  double step_ms = 600'000.0;
};

EventLog generate_synthetic_log(const SyntheticParams& params = {});

}  // namespace procast
