#include "procast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "procast/parallel.hpp"

namespace procast {

const char* slice_rounding_name(SliceRounding r) {
  switch (r) {
    case SliceRounding::HalfUp: return "halfUp";
    case SliceRounding::Floor: return "floor";
    case SliceRounding::Ceil: return "ceil";
  }
  return "?";
}

std::optional<SliceRounding> slice_rounding_from_name(const std::string& name) {
  if (name == "halfUp") return SliceRounding::HalfUp;
  if (name == "floor") return SliceRounding::Floor;
  if (name == "ceil") return SliceRounding::Ceil;
  return std::nullopt;
}

std::size_t slice_point(std::size_t n, double fraction, SliceRounding rounding) {
  const double x = fraction * static_cast<double>(n);
  double k;
  switch (rounding) {
    case SliceRounding::HalfUp: k = std::floor(x + 0.5); break;
    case SliceRounding::Floor: k = std::floor(x); break;
    case SliceRounding::Ceil: k = std::ceil(x); break;
    default: k = std::floor(x + 0.5); break;
  }
  const auto lo = 2.0;
  const auto hi = static_cast<double>(n) - 1.0;
  return static_cast<std::size_t>(std::clamp(k, lo, hi));
}

const SliceMetrics& MetricsReport::at(Slice s) const {
  switch (s) {
    case Slice::Early: return early;
    case Slice::Mid: return mid;
    case Slice::Late: return late;
    case Slice::All: return all;
  }
  return all;
}

namespace {

struct EvalRow {
  std::size_t k = 0;
  bool at_early = false, at_mid = false, at_late = false;
  foe::TargetValue truth;
  Prediction prediction;
};

SliceMetrics classification_metrics(const std::vector<const EvalRow*>& rows,
                                    const std::vector<std::string>& class_labels) {
  SliceMetrics m;
  m.count = rows.size();
  if (rows.empty()) return m;

  std::size_t correct = 0;
  std::vector<std::size_t> truth_index(rows.size());
  std::vector<std::vector<double>> per_class_scores(
      class_labels.size(), std::vector<double>(rows.size(), 0.0));

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EvalRow& row = *rows[i];
    const std::string truth_label = row.truth.to_string();
    if (truth_label == row.prediction.label) ++correct;
    // truths outside the training label set get an out-of-range index: they
    // count as negatives for every one-vs-rest problem
    std::size_t idx = class_labels.size();
    for (std::size_t c = 0; c < class_labels.size(); ++c) {
      if (class_labels[c] == truth_label) {
        idx = c;
        break;
      }
    }
    truth_index[i] = idx;
    for (std::size_t c = 0; c < class_labels.size() && c < row.prediction.scores.size(); ++c) {
      per_class_scores[c][i] = row.prediction.scores[c];
    }
  }

  m.accuracy = static_cast<double>(correct) / static_cast<double>(rows.size());
  m.auc = multiclass_auc(per_class_scores, truth_index);
  return m;
}

SliceMetrics regression_metrics(const std::vector<const EvalRow*>& rows) {
  SliceMetrics m;
  m.count = rows.size();
  if (rows.empty()) return m;
  std::vector<double> pred(rows.size()), truth(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    pred[i] = rows[i]->prediction.value;
    truth[i] = rows[i]->truth.num;
  }
  auto [mae, rmse] = mae_rmse(pred, truth);
  m.mae = mae;
  m.rmse = rmse;
  return m;
}

SliceMetrics baseline_metrics(const std::vector<const EvalRow*>& rows, double constant) {
  SliceMetrics m;
  m.count = rows.size();
  if (rows.empty()) return m;
  std::vector<double> pred(rows.size(), constant), truth(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) truth[i] = rows[i]->truth.num;
  auto [mae, rmse] = mae_rmse(pred, truth);
  m.mae = mae;
  m.rmse = rmse;
  return m;
}

}  // namespace

MetricsReport evaluate_model(const Model& model, const foe::AnalyticRule& rule,
                             const EventLog& test_log, const FeatureEncoder& encoder,
                             const EvalOptions& options, foe::EvalWarnings* warn) {
  const TaskKind rule_kind =
      rule.kind == foe::ValueKind::Numeric ? TaskKind::Regression : TaskKind::Classification;
  if (rule_kind != model.task()) {
    throw DomainError("model task kind does not match the rule (model is " +
                      std::string(task_kind_name(model.task())) + ", rule is " +
                      task_kind_name(rule_kind) + ")");
  }

  struct PerTrace {
    std::vector<EvalRow> rows;
    std::size_t dropped = 0;
    bool skipped = false;
    foe::EvalWarnings warnings;
  };
  std::vector<PerTrace> partial(test_log.traces.size());

  parallel_for(test_log.traces.size(), options.workers, [&](std::size_t t) {
    const Trace& trace = test_log.traces[t];
    PerTrace& out = partial[t];
    const std::size_t n = trace.size();
    if (n < 3) {
      out.skipped = true;  // no k with 2 <= k < n
      return;
    }
    auto [lo, hi] = options.krange.resolve(n);
    const std::size_t k_early = slice_point(n, 0.25, options.rounding);
    const std::size_t k_mid = slice_point(n, 0.5, options.rounding);
    const std::size_t k_late = slice_point(n, 0.75, options.rounding);

    for (std::size_t k = lo; k <= hi; ++k) {
      TracePrefix p(trace, k);
      foe::TargetValue truth = foe::apply_rule(rule, p, &out.warnings);
      if (truth.is_undefined()) {
        ++out.dropped;
        continue;
      }
      EvalRow row;
      row.k = k;
      row.at_early = k == k_early;
      row.at_mid = k == k_mid;
      row.at_late = k == k_late;
      row.truth = std::move(truth);
      row.prediction = model.predict(encoder.encode(p, &out.warnings));
      out.rows.push_back(std::move(row));
    }
  });

  MetricsReport report;
  report.kind = model.task();
  report.algorithm = algorithm_name(model.algorithm());

  std::vector<EvalRow> rows;
  for (auto& per : partial) {
    if (per.skipped) ++report.skipped_traces;
    report.dropped_targets += per.dropped;
    if (warn) warn->merge(per.warnings);
    for (auto& r : per.rows) rows.push_back(std::move(r));
  }

  std::vector<const EvalRow*> all, early, mid, late;
  for (const auto& r : rows) {
    all.push_back(&r);
    if (r.at_early) early.push_back(&r);
    if (r.at_mid) mid.push_back(&r);
    if (r.at_late) late.push_back(&r);
  }

  if (model.task() == TaskKind::Classification) {
    report.early = classification_metrics(early, model.class_labels());
    report.mid = classification_metrics(mid, model.class_labels());
    report.late = classification_metrics(late, model.class_labels());
    report.all = classification_metrics(all, model.class_labels());
  } else {
    report.early = regression_metrics(early);
    report.mid = regression_metrics(mid);
    report.late = regression_metrics(late);
    report.all = regression_metrics(all);
    const double mean = model.training_target_mean();
    report.baseline_early = baseline_metrics(early, mean);
    report.baseline_mid = baseline_metrics(mid, mean);
    report.baseline_late = baseline_metrics(late, mean);
    report.baseline_all = baseline_metrics(all, mean);
  }
  return report;
}

// --- rendering --------------------------------------------------------------------

namespace {

std::string fmt_cell(std::optional<double> v, double divisor) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v / divisor);
  return buf;
}

void row(std::ostringstream& out, const std::string& name,
         const std::vector<std::string>& cells, std::size_t name_width) {
  out << name;
  for (std::size_t i = name.size(); i < name_width; ++i) out << ' ';
  for (const auto& c : cells) {
    out << ' ';
    for (std::size_t i = c.size(); i < 9; ++i) out << ' ';
    out << c;
  }
  out << '\n';
}

}  // namespace

std::string MetricsReport::table(double display_unit_divisor,
                                 const std::string& unit_label) const {
  std::ostringstream out;
  const bool classification = kind == TaskKind::Classification;
  const std::string m1 = classification ? "Accuracy" : ("MAE" + unit_label);
  const std::string m2 = classification ? "AUC" : ("RMSE" + unit_label);
  const std::size_t name_width = std::max<std::size_t>(algorithm.size() + 2, 22);

  std::string pad(name_width, ' ');
  out << pad << " " << m1;
  for (std::size_t i = m1.size(); i < 4 * 10 - 1; ++i) out << ' ';
  out << " " << m2 << '\n';

  row(out, "", {"Early", "Mid", "Late", "All", "Early", "Mid", "Late", "All"}, name_width);

  auto metric_cells = [&](const SliceMetrics& e, const SliceMetrics& m, const SliceMetrics& l,
                          const SliceMetrics& a) {
    std::vector<std::string> cells;
    const double acc_div = classification ? 1.0 : display_unit_divisor;
    for (const SliceMetrics* s : {&e, &m, &l, &a}) {
      cells.push_back(fmt_cell(classification ? s->accuracy : s->mae, acc_div));
    }
    for (const SliceMetrics* s : {&e, &m, &l, &a}) {
      cells.push_back(fmt_cell(classification ? s->auc : s->rmse, acc_div));
    }
    return cells;
  };

  row(out, algorithm, metric_cells(early, mid, late, all), name_width);
  if (baseline_all) {
    row(out, "meanBaseline",
        metric_cells(*baseline_early, *baseline_mid, *baseline_late, *baseline_all),
        name_width);
  }

  out << "\nrows: all=" << all.count << " early=" << early.count << " mid=" << mid.count
      << " late=" << late.count << "; skipped short traces: " << skipped_traces
      << "; undefined-target prefixes dropped: " << dropped_targets << '\n';
  return out.str();
}

}  // namespace procast
