#include "procast/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "procast/foe_parser.hpp"
#include "procast/xes.hpp"

namespace procast {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void config_fail(const std::string& msg) { throw ConfigError("config: " + msg); }

CsvColumnType csv_type_from_name(const std::string& name) {
  if (name == "string") return CsvColumnType::Str;
  if (name == "number") return CsvColumnType::Num;
  if (name == "timestamp") return CsvColumnType::Timestamp;
  if (name == "bool") return CsvColumnType::Bool;
  config_fail("unknown csv column type '" + name + "' (string|number|timestamp|bool)");
}

std::vector<EncoderSpec> default_encoders() {
  return {
      EncoderSpec{"activity", EncoderKind::OneHotCounts, "concept:name"},
      EncoderSpec{"time", EncoderKind::TimeFeatures, ""},
  };
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << text;
}

std::string hash_hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json slice_to_json(const SliceMetrics& m) {
  json j;
  j["count"] = m.count;
  if (m.accuracy) j["accuracy"] = *m.accuracy;
  if (m.auc) j["auc"] = *m.auc;
  if (m.mae) j["mae"] = *m.mae;
  if (m.rmse) j["rmse"] = *m.rmse;
  return j;
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) config_fail("top level must be an object");

  RunConfig c;
  c.log_path = doc.value("log", "");
  c.log_format = doc.value("log_format", "xes");
  if (c.log_format != "xes" && c.log_format != "csv") {
    config_fail("log_format must be \"xes\" or \"csv\"");
  }

  if (doc.contains("csv")) {
    const json& cj = doc.at("csv");
    std::string delim = cj.value("delimiter", ",");
    if (delim.size() != 1) config_fail("csv.delimiter must be a single character");
    c.csv.delimiter = delim[0];
    c.csv.trace_id_column = cj.value("trace_id_column", "");
    if (cj.contains("timestamp_column")) {
      c.csv.timestamp_column = cj.at("timestamp_column").get<std::string>();
    }
    c.csv.timestamp_format = cj.value("timestamp_format", "iso8601");
    if (cj.contains("columns")) {
      for (const auto& [name, type] : cj.at("columns").items()) {
        c.csv.columns[name] = csv_type_from_name(type.get<std::string>());
      }
    }
  }

  c.rule_path = doc.value("rule", "");

  if (doc.contains("encoders")) {
    for (const auto& ej : doc.at("encoders")) {
      EncoderSpec spec;
      spec.id = ej.value("id", "");
      auto kind = encoder_kind_from_name(ej.value("kind", ""));
      if (!kind) config_fail("unknown encoder kind '" + ej.value("kind", "") + "'");
      spec.kind = *kind;
      spec.attribute = ej.value("attribute", "");
      if (spec.kind != EncoderKind::TimeFeatures && spec.attribute.empty()) {
        config_fail("encoder '" + spec.id + "' needs an attribute");
      }
      if (spec.id.empty()) config_fail("every encoder needs a unique id");
      for (const auto& other : c.encoders) {
        if (other.id == spec.id) config_fail("duplicate encoder id '" + spec.id + "'");
      }
      c.encoders.push_back(std::move(spec));
    }
  }
  if (c.encoders.empty()) c.encoders = default_encoders();

  if (doc.contains("split")) {
    const json& sj = doc.at("split");
    c.split.train_fraction = sj.value("train_fraction", 2.0 / 3.0);
    const std::string order = sj.value("order", "firstEventTimestamp");
    if (order == "firstEventTimestamp") {
      c.split.order = SplitOrder::FirstEventTimestamp;
    } else if (order == "logOrder") {
      c.split.order = SplitOrder::LogOrder;
    } else {
      config_fail("split.order must be firstEventTimestamp or logOrder");
    }
  }

  c.krange.k_min = doc.value("k_min", 2);
  c.krange.k_max = doc.value("k_max", -1);
  if (c.krange.k_min < 1) config_fail("k_min must be >= 1");
  if (c.krange.k_max < -1) config_fail("k_max must be -1 (|trace|-1), 0 (|trace|) or positive");

  if (doc.contains("algorithm")) {
    auto algo = algorithm_from_name(doc.at("algorithm").get<std::string>());
    if (!algo) config_fail("unknown algorithm '" + doc.at("algorithm").get<std::string>() + "'");
    c.algorithm = *algo;
  }

  if (doc.contains("params")) {
    const json& pj = doc.at("params");
    c.params.max_depth = pj.value("max_depth", c.params.max_depth);
    c.params.min_samples_leaf = pj.value("min_samples_leaf", c.params.min_samples_leaf);
    c.params.n_trees = pj.value("n_trees", c.params.n_trees);
    c.params.feature_subsample = pj.value("feature_subsample", c.params.feature_subsample);
    c.params.rng_seed = pj.value("seed", c.params.rng_seed);
    c.params.ridge_epsilon = pj.value("ridge_epsilon", c.params.ridge_epsilon);
    c.params.bootstrap = pj.value("bootstrap", c.params.bootstrap);
    if (c.params.max_depth < 1 || c.params.min_samples_leaf < 1 || c.params.n_trees < 1 ||
        c.params.ridge_epsilon <= 0) {
      config_fail("params must be positive");
    }
  }

  if (doc.contains("slice_rounding")) {
    auto r = slice_rounding_from_name(doc.at("slice_rounding").get<std::string>());
    if (!r) config_fail("slice_rounding must be halfUp, floor or ceil");
    c.slice_rounding = *r;
  }

  c.workers = doc.value("workers", 0);
  c.out_dir = doc.value("out_dir", "out");
  c.waive_well_defined = doc.value("skip_well_defined_check", false);

  const std::string unit = doc.value("display_unit", "ms");
  if (unit == "ms") {
    c.display_divisor = 1.0;
  } else if (unit == "s") {
    c.display_divisor = 1000.0;
    c.display_unit = " (in s)";
  } else if (unit == "days") {
    c.display_divisor = 86'400'000.0;
    c.display_unit = " (in days)";
  } else {
    config_fail("display_unit must be ms, s or days");
  }
  return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

EventLog load_log(const RunConfig& config, std::ostream& err) {
  if (config.log_path.empty()) config_fail("no log file given (config \"log\" or --log)");
  if (config.log_format == "csv") {
    if (config.csv.trace_id_column.empty()) {
      config_fail("csv ingestion needs csv.trace_id_column");
    }
    auto result = parse_csv_log_file(config.log_path, config.csv);
    if (result.warnings > 0 || result.rejected_rows > 0) {
      err << "csv: " << result.warnings << " cell warning(s), " << result.rejected_rows
          << " rejected row(s)\n";
    }
    return std::move(result.log);
  }
  auto result = parse_xes_file(config.log_path);
  if (result.skipped_attributes > 0) {
    err << "xes: skipped " << result.skipped_attributes
        << " attribute(s) outside the supported subset\n";
  }
  if (result.renamed_duplicate_ids > 0) {
    err << "xes: suffixed " << result.renamed_duplicate_ids << " duplicate trace id(s)\n";
  }
  return std::move(result.log);
}

namespace {

foe::AnalyticRule load_rule(const RunConfig& config) {
  if (config.rule_path.empty()) config_fail("no rule file given (config \"rule\" or --rule)");
  return foe::parse_rule_file(config.rule_path);
}

void ensure_out_dir(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
}

struct PreparedRun {
  foe::AnalyticRule rule;
  EventLog train_log;
  EventLog test_log;
  FeatureEncoder encoder;
};

PreparedRun prepare(const RunConfig& config, std::ostream& err) {
  foe::AnalyticRule rule = load_rule(config);
  EventLog log = load_log(config, err);
  auto [train_log, test_log] = split_log(log, config.split);
  // the vocabulary only ever sees the training side
  FeatureEncoder encoder = FeatureEncoder::fit(train_log, config.encoders);
  return PreparedRun{std::move(rule), std::move(train_log), std::move(test_log),
                     std::move(encoder)};
}

}  // namespace

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  foe::AnalyticRule rule = load_rule(config);
  EventLog log = load_log(config, err);

  out << "rule: " << foe::to_string(rule) << "\n";
  out << "kind: " << (rule.kind == foe::ValueKind::Numeric ? "numeric (regression)"
                                                           : "non-numeric (classification)")
      << "\n";

  foe::EvalWarnings warnings;
  auto report = foe::check_well_defined(rule, log, config.krange, &warnings);
  out << "prefixes checked: " << report.prefixes_checked << "\n";

  json doc;
  doc["rule"] = foe::to_string(rule);
  doc["kind"] = rule.kind == foe::ValueKind::Numeric ? "numeric" : "nonNumeric";
  doc["well_defined"] = report.ok;
  doc["prefixes_checked"] = report.prefixes_checked;
  json violations = json::array();

  if (report.ok) {
    out << "well-defined: yes\n";
  } else {
    out << "well-defined: NO (" << report.violations.size() << " violating prefix(es))\n";
    out << "trace            k   conditions -> values\n";
    std::size_t shown = 0;
    for (const auto& v : report.violations) {
      json vj;
      vj["trace"] = v.trace_id;
      vj["k"] = v.k;
      vj["conditions"] = v.condition_indices;
      json values = json::array();
      for (const auto& val : v.values) values.push_back(val.tagged());
      vj["values"] = std::move(values);
      violations.push_back(std::move(vj));

      if (shown < 20) {
        out << v.trace_id;
        for (std::size_t i = v.trace_id.size(); i < 16; ++i) out << ' ';
        out << ' ' << v.k << "   ";
        for (std::size_t i = 0; i < v.condition_indices.size(); ++i) {
          if (i) out << ", ";
          out << '#' << v.condition_indices[i] << "='" << v.values[i].to_string() << '\'';
        }
        out << '\n';
        ++shown;
      }
    }
    if (report.violations.size() > shown) {
      out << "... and " << report.violations.size() - shown << " more\n";
    }
  }
  doc["violations"] = std::move(violations);

  ensure_out_dir(config);
  write_text_file(config.out_dir + "/well_definedness.json", doc.dump(2) + "\n");
  return report.ok ? kExitOk : kExitDomainFailure;
}

int cmd_build_dataset(const RunConfig& config, std::ostream& out, std::ostream& err) {
  PreparedRun run = prepare(config, err);

  BuildOptions options;
  options.krange = config.krange;
  options.waive_well_defined = config.waive_well_defined;
  options.workers = config.workers;

  foe::EvalWarnings warnings;
  Dataset train = build_dataset(run.rule, run.train_log, run.encoder, options, &warnings);
  Dataset test = build_dataset(run.rule, run.test_log, run.encoder, options, &warnings);

  ensure_out_dir(config);
  {
    std::ofstream f(config.out_dir + "/train.csv", std::ios::binary);
    write_dataset_csv(train, f);
  }
  {
    std::ofstream f(config.out_dir + "/test.csv", std::ios::binary);
    write_dataset_csv(test, f);
  }

  json meta;
  meta["kind"] = task_kind_name(train.kind);
  meta["schema"] = train.schema.names;
  meta["schema_hash"] = hash_hex64(train.schema.hash());
  meta["class_labels"] = train.class_labels;
  json encoders = json::array();
  for (const auto& spec : config.encoders) {
    encoders.push_back(json{{"id", spec.id},
                            {"kind", encoder_kind_name(spec.kind)},
                            {"attribute", spec.attribute}});
  }
  meta["encoders"] = std::move(encoders);
  meta["vocabulary_hash"] = hash_hex64(run.encoder.vocabulary().content_hash());
  meta["rows"] = json{{"train", train.rows.size()}, {"test", test.rows.size()}};
  meta["dropped_undefined"] =
      json{{"train", train.dropped_undefined}, {"test", test.dropped_undefined}};
  meta["traces"] = json{{"train", run.train_log.traces.size()},
                        {"test", run.test_log.traces.size()}};
  write_text_file(config.out_dir + "/dataset_meta.json", meta.dump(2) + "\n");

  out << "train: " << train.rows.size() << " rows (" << train.dropped_undefined
      << " undefined dropped) from " << run.train_log.traces.size() << " traces\n";
  out << "test:  " << test.rows.size() << " rows (" << test.dropped_undefined
      << " undefined dropped) from " << run.test_log.traces.size() << " traces\n";
  if (warnings.total() > 0) err << "evaluation warnings: " << warnings.total() << "\n";
  return kExitOk;
}

int cmd_train(const RunConfig& config, const std::string& model_out, std::ostream& out,
              std::ostream& err) {
  PreparedRun run = prepare(config, err);

  BuildOptions options;
  options.krange = config.krange;
  options.waive_well_defined = config.waive_well_defined;
  options.workers = config.workers;

  foe::EvalWarnings warnings;
  Dataset train = build_dataset(run.rule, run.train_log, run.encoder, options, &warnings);

  TrainParams params = config.params;
  params.workers = config.workers;
  Model model = Model::train(train, config.algorithm, params);

  const std::string path = model_out.empty() ? config.out_dir + "/model.json" : model_out;
  ensure_out_dir(config);
  save_model_file(model, run.encoder, path);

  out << "trained " << algorithm_name(model.algorithm()) << " ("
      << task_kind_name(model.task()) << ") on " << train.rows.size() << " rows, "
      << train.schema.names.size() << " features -> " << path << "\n";
  if (warnings.total() > 0) err << "evaluation warnings: " << warnings.total() << "\n";
  return kExitOk;
}

int cmd_evaluate(const RunConfig& config, const std::string& model_path, std::ostream& out,
                 std::ostream& err) {
  foe::AnalyticRule rule = load_rule(config);
  EventLog log = load_log(config, err);
  auto [train_log, test_log] = split_log(log, config.split);
  (void)train_log;

  LoadedModel loaded = load_model_file(model_path.empty() ? config.out_dir + "/model.json"
                                                          : model_path);

  EvalOptions options;
  options.rounding = config.slice_rounding;
  options.krange = config.krange;
  options.workers = config.workers;

  foe::EvalWarnings warnings;
  MetricsReport report =
      evaluate_model(loaded.model, rule, test_log, loaded.encoder, options, &warnings);

  out << report.table(config.display_divisor, config.display_unit);

  json doc;
  doc["task"] = task_kind_name(report.kind);
  doc["algorithm"] = report.algorithm;
  doc["slice_rounding"] = slice_rounding_name(config.slice_rounding);
  doc["slices"] = json{{"early", slice_to_json(report.early)},
                       {"mid", slice_to_json(report.mid)},
                       {"late", slice_to_json(report.late)},
                       {"all", slice_to_json(report.all)}};
  if (report.baseline_all) {
    doc["baseline"] = json{{"early", slice_to_json(*report.baseline_early)},
                           {"mid", slice_to_json(*report.baseline_mid)},
                           {"late", slice_to_json(*report.baseline_late)},
                           {"all", slice_to_json(*report.baseline_all)}};
  }
  doc["skipped_traces"] = report.skipped_traces;
  doc["dropped_targets"] = report.dropped_targets;
  ensure_out_dir(config);
  write_text_file(config.out_dir + "/report.json", doc.dump(2) + "\n");

  if (warnings.total() > 0) err << "evaluation warnings: " << warnings.total() << "\n";
  return kExitOk;
}

int cmd_predict(const RunConfig& config, const std::string& model_path,
                const std::string& trace_id, std::size_t k, std::ostream& out,
                std::ostream& err) {
  EventLog log = load_log(config, err);
  LoadedModel loaded = load_model_file(model_path);

  const Trace* trace = nullptr;
  for (const auto& t : log.traces) {
    if (t.id() == trace_id) {
      trace = &t;
      break;
    }
  }
  if (trace == nullptr) throw DomainError("no trace with id '" + trace_id + "' in the log");

  TracePrefix p(*trace, k);  // throws DomainError when k is out of range
  foe::EvalWarnings warnings;
  Prediction prediction = loaded.model.predict(loaded.encoder.encode(p, &warnings));

  if (loaded.model.task() == TaskKind::Regression) {
    out << "prediction: " << format_double(prediction.value) << "\n";
  } else {
    out << "prediction: " << prediction.label << "\n";
    const auto& labels = loaded.model.class_labels();
    for (std::size_t c = 0; c < labels.size(); ++c) {
      out << "  score[" << labels[c] << "] = " << format_double(prediction.scores[c]) << "\n";
    }
  }
  if (warnings.unseen_values > 0) {
    err << "warning: " << warnings.unseen_values << " attribute value(s) unseen in training\n";
  }
  return kExitOk;
}

int cmd_gen_synthetic(const SyntheticParams& params, const std::string& out_path,
                      std::ostream& out, std::ostream& err) {
  (void)err;
  EventLog log = generate_synthetic_log(params);
  write_xes_file(log, out_path);
  out << "wrote " << log.traces.size() << " traces (" << log.total_events() << " events) to "
      << out_path << "\n";
  return kExitOk;
}

}  // namespace procast
