#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "procast/learners.hpp"
#include "procast/metrics.hpp"

namespace procast {

/// Prediction points inside a trace of length n: Early/Mid/Late evaluate the
/// single prefix k = clamp(round(n*q), 2, n-1) for q = 1/4, 1/2, 3/4; All
/// covers every k with 2 <= k < n.
enum class Slice { Early, Mid, Late, All };

enum class SliceRounding { HalfUp, Floor, Ceil };

const char* slice_rounding_name(SliceRounding r);
std::optional<SliceRounding> slice_rounding_from_name(const std::string& name);

/// The k evaluated by a fractional slice on a trace of length n (n >= 3).
std::size_t slice_point(std::size_t n, double fraction, SliceRounding rounding);

struct SliceMetrics {
  std::size_t count = 0;
  std::optional<double> accuracy;  // classification
  std::optional<double> auc;       // classification; absent when single-class
  std::optional<double> mae;       // regression
  std::optional<double> rmse;      // regression
};

struct MetricsReport {
  TaskKind kind = TaskKind::Classification;
  std::string algorithm;
  SliceMetrics early, mid, late, all;
  /// Mean-based prediction on the same truths (regression only).
  std::optional<SliceMetrics> baseline_early, baseline_mid, baseline_late, baseline_all;
  std::size_t skipped_traces = 0;   // length < 3: no valid prefix
  std::size_t dropped_targets = 0;  // prefixes whose ground truth was undefined

  const SliceMetrics& at(Slice s) const;

  /// Aligned text table, one row per model (+ baseline), Early/Mid/Late/All
  /// columns per metric. display_unit_divisor rescales MAE/RMSE (e.g.
  /// 86_400_000 to report in days).
  std::string table(double display_unit_divisor = 1.0,
                    const std::string& unit_label = "") const;
};

struct EvalOptions {
  SliceRounding rounding = SliceRounding::HalfUp;
  foe::KRange krange;  // the "All" sweep; defaults to 2..|trace|-1
  int workers = 0;
};

/// The evaluation protocol: per-prefix prediction over the test log with
/// ground truth recomputed by apply_rule on the full traces (identical to
/// how training labels are built). Throws DomainError when the model's task
/// kind does not match the rule's.
MetricsReport evaluate_model(const Model& model, const foe::AnalyticRule& rule,
                             const EventLog& test_log, const FeatureEncoder& encoder,
                             const EvalOptions& options = {},
                             foe::EvalWarnings* warn = nullptr);

}  // namespace procast
