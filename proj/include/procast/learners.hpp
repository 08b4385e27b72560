#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "procast/dataset.hpp"

namespace procast {

enum class Algorithm { DecisionTree, RandomForest, LinearRegression, MeanBaseline };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

struct TrainParams {
  int max_depth = 12;
  int min_samples_leaf = 5;
  int n_trees = 100;
  /// Fraction of features drawn per split; <= 0 selects round(sqrt(m)).
  double feature_subsample = 0.0;
  std::uint64_t rng_seed = 42;
  double ridge_epsilon = 1e-8;
  bool bootstrap = true;
  int workers = 0;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // goes left when x[feature] <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  double value = 0.0;                // regression leaf: mean target
  std::vector<double> class_counts;  // classification leaf
};

struct Tree {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

struct Prediction {
  double value = 0.0;           // regression output
  std::size_t class_index = 0;  // classification output
  std::string label;
  std::vector<double> scores;   // per-class (leaf frequencies / vote fractions)
};

/// A trained prediction function. Immutable; predict is pure.
class Model {
public:
  /// Deterministic given the dataset and rng_seed. Throws DomainError on an
  /// algorithm/kind mismatch or an empty dataset; all-identical targets are
  /// fine (the model degenerates to a constant).
  static Model train(const Dataset& dataset, Algorithm algorithm,
                     const TrainParams& params = {});

  /// Rejects vectors whose schema hash differs from the training schema.
  Prediction predict(const FeatureVector& features) const;

  Algorithm algorithm() const { return algorithm_; }
  TaskKind task() const { return task_; }
  std::uint64_t schema_hash() const { return schema_hash_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& class_labels() const { return class_labels_; }
  const TrainParams& params() const { return params_; }
  /// Mean training target (regression); the baseline row in reports.
  double training_target_mean() const { return training_target_mean_; }

  struct TreeModel { Tree tree; };
  struct ForestModel { std::vector<Tree> trees; };
  struct LinearModel { std::vector<double> coefficients; double intercept = 0.0; };
  struct ConstantModel { double value = 0.0; std::size_t class_index = 0; std::vector<double> scores; };
  using Payload = std::variant<TreeModel, ForestModel, LinearModel, ConstantModel>;

  const Payload& payload() const { return payload_; }

private:
  friend struct ModelSerde;

  Algorithm algorithm_ = Algorithm::MeanBaseline;
  TaskKind task_ = TaskKind::Regression;
  std::uint64_t schema_hash_ = 0;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_labels_;
  TrainParams params_;
  double training_target_mean_ = 0.0;
  Payload payload_;
};

/// Versioned self-contained model document: schema hash and feature names,
/// class labels, train params, rng seed, encoder specs and the fitted
/// vocabulary, plus the model parameters themselves (see docs/file-formats.md).
void save_model(const Model& model, const FeatureEncoder& encoder, std::ostream& out);
void save_model_file(const Model& model, const FeatureEncoder& encoder,
                     const std::string& path);

struct LoadedModel {
  Model model;
  FeatureEncoder encoder;
};

/// Throws DomainError on version/format mismatch, a corrupt document, or a
/// vocabulary that no longer reproduces the stored schema hash.
LoadedModel load_model(std::istream& in);
LoadedModel load_model_file(const std::string& path);

}  // namespace procast
