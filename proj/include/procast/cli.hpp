#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "procast/csv_log.hpp"
#include "procast/dataset.hpp"
#include "procast/evaluation.hpp"
#include "procast/learners.hpp"
#include "procast/synthetic.hpp"

namespace procast {

/// One run configuration: a JSON document plus command-line overrides
/// (flags win). See configs/ for examples and docs/file-formats.md for the
/// schema.
struct RunConfig {
  std::string log_path;
  std::string log_format = "xes";  // "xes" | "csv"
  CsvMapping csv;

  std::string rule_path;

  std::vector<EncoderSpec> encoders;  // defaulted when absent, see load

  SplitSpec split;
  foe::KRange krange;

  Algorithm algorithm = Algorithm::RandomForest;
  TrainParams params;

  SliceRounding slice_rounding = SliceRounding::HalfUp;
  int workers = 0;
  std::string out_dir = "out";
  bool waive_well_defined = false;

  /// MAE/RMSE display rescaling, e.g. "days" divides by 86_400_000.
  double display_divisor = 1.0;
  std::string display_unit;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::string& path);
};

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainFailure = 1;
inline constexpr int kExitUsage = 2;

/// Loads the configured log (XES or CSV); ingestion warnings go to err.
EventLog load_log(const RunConfig& config, std::ostream& err);

// Subcommands. All throw procast errors upward (main maps ParseError /
// ConfigError / StaticCheckError to exit 2 and DomainError to exit 1);
// the returned code covers non-exceptional domain outcomes.

/// Prints the rule's coherence kind and the well-definedness report (table
/// to out, JSON to <out_dir>/well_definedness.json). 0 iff well-defined.
int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Splits the log, fits the vocabulary on the training side, builds both
/// datasets and writes train.csv / test.csv / dataset_meta.json.
int cmd_build_dataset(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Trains on the training split and writes the model document.
int cmd_train(const RunConfig& config, const std::string& model_out, std::ostream& out,
              std::ostream& err);

/// Evaluates a trained model on the test split at Early/Mid/Late/All points;
/// writes <out_dir>/report.json and prints the table.
int cmd_evaluate(const RunConfig& config, const std::string& model_path, std::ostream& out,
                 std::ostream& err);

/// Predicts the target of one prefix: encodes trace `trace_id` at length k
/// with the model's own encoders and prints the prediction (and per-class
/// scores).
int cmd_predict(const RunConfig& config, const std::string& model_path,
                const std::string& trace_id, std::size_t k, std::ostream& out,
                std::ostream& err);

/// Writes the bundled synthetic log as XES.
int cmd_gen_synthetic(const SyntheticParams& params, const std::string& out_path,
                      std::ostream& out, std::ostream& err);

}  // namespace procast
