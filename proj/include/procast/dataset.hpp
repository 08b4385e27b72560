#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "procast/encoding.hpp"
#include "procast/event_log.hpp"
#include "procast/foe_eval.hpp"

namespace procast {

enum class TaskKind { Classification, Regression };

const char* task_kind_name(TaskKind k);

struct DatasetRow {
  std::string trace_id;
  std::size_t k = 0;
  std::vector<double> features;
  foe::TargetValue target;
  std::size_t class_index = 0;  // classification only
};

/// Labeled training/evaluation instances: one row per (trace, k) prefix,
/// features from the encoders, target from the rule. Rows are sorted by
/// (trace id, k) so rebuilds are byte-identical regardless of scheduling.
struct Dataset {
  TaskKind kind = TaskKind::Classification;
  FeatureSchema schema;
  std::vector<std::string> class_labels;  // first-occurrence order
  std::vector<DatasetRow> rows;
  std::size_t dropped_undefined = 0;  // prefixes whose target was undefined

  std::vector<double> numeric_targets() const;
};

struct BuildOptions {
  foe::KRange krange;
  /// Skip the well-definedness gate (--skip-well-defined-check).
  bool waive_well_defined = false;
  int workers = 0;
};

/// Prefix sweep: for each trace and each k in range, encode the prefix and
/// label it with the rule; undefined-target rows are dropped (and counted).
/// Throws DomainError when the rule is not well-defined for the log (unless
/// waived) and when every target came out undefined.
Dataset build_dataset(const foe::AnalyticRule& rule, const EventLog& log,
                      const FeatureEncoder& encoder, const BuildOptions& options = {},
                      foe::EvalWarnings* warn = nullptr);

enum class SplitOrder { FirstEventTimestamp, LogOrder };

struct SplitSpec {
  double train_fraction = 2.0 / 3.0;  // in (0,1)
  SplitOrder order = SplitOrder::FirstEventTimestamp;
};

/// Temporal split at trace granularity: traces ordered by the split key,
/// the first ceil(fraction * N) go to train, the rest to test. Throws
/// DomainError for logs with fewer than two traces or a fraction outside (0,1).
std::pair<EventLog, EventLog> split_log(const EventLog& log, const SplitSpec& spec);

/// CSV export: header = feature names + "target"; regression targets print
/// as numbers, classification targets as label text.
void write_dataset_csv(const Dataset& ds, std::ostream& out);

}  // namespace procast
