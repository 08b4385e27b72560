#include "procast/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "procast/parallel.hpp"

namespace procast {

const char* task_kind_name(TaskKind k) {
  return k == TaskKind::Classification ? "classification" : "regression";
}

std::vector<double> Dataset::numeric_targets() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.target.num);
  return out;
}

Dataset build_dataset(const foe::AnalyticRule& rule, const EventLog& log,
                      const FeatureEncoder& encoder, const BuildOptions& options,
                      foe::EvalWarnings* warn) {
  if (!options.waive_well_defined) {
    auto report = check_well_defined(rule, log, options.krange);
    if (!report.ok) {
      const auto& v = report.violations.front();
      throw DomainError(
          "rule is not well-defined for this log: " + std::to_string(report.violations.size()) +
          " conflicting prefix(es), first at trace '" + v.trace_id + "' k=" +
          std::to_string(v.k) + " (conditions map it to distinct targets); re-run with the "
          "check waived to proceed anyway");
    }
  }

  struct PerTrace {
    std::vector<DatasetRow> rows;
    std::size_t dropped = 0;
    foe::EvalWarnings warnings;
  };
  std::vector<PerTrace> partial(log.traces.size());

  parallel_for(log.traces.size(), options.workers, [&](std::size_t t) {
    const Trace& trace = log.traces[t];
    PerTrace& out = partial[t];
    auto [lo, hi] = options.krange.resolve(trace.size());
    for (std::size_t k = lo; k <= hi; ++k) {
      TracePrefix p(trace, k);
      foe::TargetValue target = foe::apply_rule(rule, p, &out.warnings);
      if (target.is_undefined()) {
        ++out.dropped;
        continue;
      }
      FeatureVector features = encoder.encode(p, &out.warnings);
      DatasetRow row;
      row.trace_id = trace.id();
      row.k = k;
      row.features = std::move(features.values);
      row.target = std::move(target);
      out.rows.push_back(std::move(row));
    }
  });

  Dataset ds;
  ds.kind = rule.kind == foe::ValueKind::Numeric ? TaskKind::Regression
                                                 : TaskKind::Classification;
  ds.schema = encoder.schema();
  for (auto& per : partial) {
    ds.dropped_undefined += per.dropped;
    if (warn) warn->merge(per.warnings);
    for (auto& row : per.rows) ds.rows.push_back(std::move(row));
  }

  // stable so that rows with equal (id, k) keys (only possible in logs that
  // bypassed ingestion) still come out in log order
  std::stable_sort(ds.rows.begin(), ds.rows.end(),
                   [](const DatasetRow& a, const DatasetRow& b) {
                     if (a.trace_id != b.trace_id) return a.trace_id < b.trace_id;
                     return a.k < b.k;
                   });

  if (ds.rows.empty()) {
    throw DomainError("empty dataset: every prefix in range mapped to an undefined target (" +
                      std::to_string(ds.dropped_undefined) + " dropped)");
  }

  if (ds.kind == TaskKind::Classification) {
    std::unordered_map<std::string, std::size_t> label_index;
    for (auto& row : ds.rows) {
      const std::string label = row.target.to_string();
      auto [it, inserted] = label_index.emplace(label, ds.class_labels.size());
      if (inserted) ds.class_labels.push_back(label);
      row.class_index = it->second;
    }
  }
  return ds;
}

std::pair<EventLog, EventLog> split_log(const EventLog& log, const SplitSpec& spec) {
  if (log.traces.size() < 2) {
    throw DomainError("cannot split a log with fewer than 2 traces");
  }
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw DomainError("train fraction must lie strictly between 0 and 1");
  }

  std::vector<std::size_t> order(log.traces.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  if (spec.order == SplitOrder::FirstEventTimestamp) {
    auto first_ts = [&](std::size_t i) -> double {
      const Trace& t = log.traces[i];
      if (!t.empty()) {
        const AttrValue& v = t.at(1).attr("time:timestamp");
        if (v.is_numeric()) return v.number();
      }
      return std::numeric_limits<double>::infinity();  // undated traces go last
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      double ta = first_ts(a), tb = first_ts(b);
      if (ta != tb) return ta < tb;
      return log.traces[a].id() < log.traces[b].id();  // deterministic tie-break
    });
  }

  const double exact = spec.train_fraction * static_cast<double>(log.traces.size());
  auto train_count = static_cast<std::size_t>(std::ceil(exact - 1e-9));
  if (train_count < 1) train_count = 1;

  EventLog train, test;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < train_count ? train : test).traces.push_back(log.traces[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

namespace {

void write_csv_field(std::ostream& out, const std::string& s) {
  const bool needs_quotes = s.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

void write_dataset_csv(const Dataset& ds, std::ostream& out) {
  for (const auto& name : ds.schema.names) {
    write_csv_field(out, name);
    out << ',';
  }
  out << "target\n";
  for (const auto& row : ds.rows) {
    for (double v : row.features) out << format_double(v) << ',';
    write_csv_field(out, row.target.to_string());
    out << '\n';
  }
}

}  // namespace procast
