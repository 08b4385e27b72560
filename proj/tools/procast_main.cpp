#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "procast/cli.hpp"
#include "procast/foe_parser.hpp"

using namespace procast;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string log_path;
  std::string rule_path;
  std::string algorithm;
  std::string out_dir;
  std::string slice_rounding;
  std::string display_unit;
  double train_fraction = -1.0;
  long long k_min = -1000, k_max = -1000;
  std::optional<std::uint64_t> seed;
  int workers = -1;
  bool skip_well_defined = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "run configuration (JSON)");
    cmd->add_option("--log", log_path, "event log path (overrides config)");
    cmd->add_option("--rule", rule_path, "rule file path (overrides config)");
    cmd->add_option("--algorithm", algorithm,
                    "decisionTree|randomForest|linearRegression|meanBaseline");
    cmd->add_option("--out-dir", out_dir, "output directory (default: out)");
    cmd->add_option("--train-fraction", train_fraction, "train split fraction in (0,1)");
    cmd->add_option("--k-min", k_min, "smallest prefix length (default 2)");
    cmd->add_option("--k-max", k_max,
                    "largest prefix length; -1 = |trace|-1 (default), 0 = |trace|");
    cmd->add_option("--seed", seed, "training rng seed");
    cmd->add_option("--workers", workers, "worker threads (0 = all cores)");
    cmd->add_option("--slice-rounding", slice_rounding, "halfUp|floor|ceil");
    cmd->add_option("--display-unit", display_unit, "ms|s|days for MAE/RMSE display");
    cmd->add_flag("--skip-well-defined-check", skip_well_defined,
                  "build datasets even for non-well-defined rules");
  }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : RunConfig::from_json_file(config_path);
    if (!log_path.empty()) c.log_path = log_path;
    if (!rule_path.empty()) c.rule_path = rule_path;
    if (!algorithm.empty()) {
      auto a = algorithm_from_name(algorithm);
      if (!a) throw ConfigError("unknown algorithm '" + algorithm + "'");
      c.algorithm = *a;
    }
    if (!out_dir.empty()) c.out_dir = out_dir;
    if (train_fraction >= 0) c.split.train_fraction = train_fraction;
    if (k_min != -1000) c.krange.k_min = k_min;
    if (k_max != -1000) c.krange.k_max = k_max;
    if (seed) c.params.rng_seed = *seed;
    if (workers >= 0) c.workers = workers;
    if (!slice_rounding.empty()) {
      auto r = slice_rounding_from_name(slice_rounding);
      if (!r) throw ConfigError("slice rounding must be halfUp, floor or ceil");
      c.slice_rounding = *r;
    }
    if (!display_unit.empty()) {
      if (display_unit == "ms") {
        c.display_divisor = 1.0;
        c.display_unit.clear();
      } else if (display_unit == "s") {
        c.display_divisor = 1000.0;
        c.display_unit = " (in s)";
      } else if (display_unit == "days") {
        c.display_divisor = 86'400'000.0;
        c.display_unit = " (in days)";
      } else {
        throw ConfigError("display unit must be ms, s or days");
      }
    }
    if (skip_well_defined) c.waive_well_defined = true;
    if (c.encoders.empty()) {
      c.encoders = {EncoderSpec{"activity", EncoderKind::OneHotCounts, "concept:name"},
                    EncoderSpec{"time", EncoderKind::TimeFeatures, ""}};
    }
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "procast - rule-driven predictive monitoring of event logs.\n"
      "Analytic rules map trace prefixes to target values; procast labels\n"
      "prefixes with a rule, trains a model on the encoded prefixes and\n"
      "evaluates predictions at early/mid/late points."};
  app.require_subcommand(1);
  app.footer(std::string("Rule language grammar:\n") + foe::grammar_ebnf() +
             "\n\nSee docs/language.md for semantics and rules/ for examples.");

  CommonFlags validate_flags, build_flags, train_flags, eval_flags, predict_flags;
  std::string model_out, model_path, predict_trace;
  std::size_t predict_k = 0;

  CLI::App* validate = app.add_subcommand(
      "validate", "check a rule's coherence kind and well-definedness over a log");
  validate_flags.attach(validate);

  CLI::App* build = app.add_subcommand(
      "build-dataset", "sweep prefixes, encode and label them, write train/test CSVs");
  build_flags.attach(build);

  CLI::App* train = app.add_subcommand("train", "build the training dataset and fit a model");
  train_flags.attach(train);
  train->add_option("--model-out", model_out, "model file (default <out-dir>/model.json)");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "score a trained model on the test split at early/mid/late/all points");
  eval_flags.attach(evaluate);
  evaluate->add_option("--model", model_path, "model file (default <out-dir>/model.json)");

  CLI::App* predict =
      app.add_subcommand("predict", "predict the target of one trace prefix with a model");
  predict_flags.attach(predict);
  predict->add_option("--model", model_path, "model file")->required();
  predict->add_option("--trace", predict_trace, "trace id")->required();
  predict->add_option("--k", predict_k, "prefix length")->required();

  SyntheticParams synth;
  std::string synth_out = "synthetic.xes";
  CLI::App* gen = app.add_subcommand(
      "gen-synthetic", "write the bundled deterministic synthetic support log (XES)");
  gen->add_option("--out", synth_out, "output path (default synthetic.xes)");
  gen->add_option("--traces", synth.traces, "number of traces (default 200)");
  gen->add_option("--length", synth.trace_length, "events per trace (default 8)");
  gen->add_option("--pingpong-fraction", synth.pingpong_fraction,
                  "fraction of traces with the planted handover (default 0.5)");
  gen->add_option("--start-ms", synth.start_ms, "first trace start, epoch ms");
  gen->add_option("--step-ms", synth.step_ms, "gap between consecutive events, ms");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      return cmd_validate(validate_flags.resolve(), std::cout, std::cerr);
    }
    if (build->parsed()) {
      return cmd_build_dataset(build_flags.resolve(), std::cout, std::cerr);
    }
    if (train->parsed()) {
      return cmd_train(train_flags.resolve(), model_out, std::cout, std::cerr);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(eval_flags.resolve(), model_path, std::cout, std::cerr);
    }
    if (predict->parsed()) {
      return cmd_predict(predict_flags.resolve(), model_path, predict_trace, predict_k,
                         std::cout, std::cerr);
    }
    if (gen->parsed()) {
      return cmd_gen_synthetic(synth, synth_out, std::cout, std::cerr);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const StaticCheckError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomainFailure;
  }
  return kExitOk;
}
