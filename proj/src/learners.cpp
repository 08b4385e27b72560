#include "procast/learners.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "procast/kernels.hpp"
#include "procast/parallel.hpp"

namespace procast {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::DecisionTree: return "decisionTree";
    case Algorithm::RandomForest: return "randomForest";
    case Algorithm::LinearRegression: return "linearRegression";
    case Algorithm::MeanBaseline: return "meanBaseline";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  if (name == "decisionTree") return Algorithm::DecisionTree;
  if (name == "randomForest") return Algorithm::RandomForest;
  if (name == "linearRegression") return Algorithm::LinearRegression;
  if (name == "meanBaseline") return Algorithm::MeanBaseline;
  return std::nullopt;
}

namespace {

// Deterministic per-tree RNG stream: state seeded with rng_seed + tree
// index, scrambled by the splitmix64 step.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t bounded(std::uint64_t n) { return next() % n; }
};

struct ColumnView {
  std::vector<std::vector<double>> columns;  // [feature][row]
  std::size_t n_rows = 0;

  static ColumnView from(const Dataset& ds) {
    ColumnView cv;
    cv.n_rows = ds.rows.size();
    const std::size_t m = ds.schema.names.size();
    cv.columns.assign(m, std::vector<double>(cv.n_rows));
    for (std::size_t r = 0; r < cv.n_rows; ++r) {
      for (std::size_t f = 0; f < m; ++f) cv.columns[f][r] = ds.rows[r].features[f];
    }
    return cv;
  }
};

// --- CART ----------------------------------------------------------------------

class TreeBuilder {
public:
  TreeBuilder(const ColumnView& cv, const Dataset& ds, const TrainParams& params,
              SplitMix64* rng, std::size_t features_per_split)
      : cv_(cv), ds_(ds), params_(params), rng_(rng),
        features_per_split_(features_per_split),
        n_classes_(ds.class_labels.size()) {}

  Tree build(std::vector<std::size_t> samples) {
    Tree tree;
    grow(tree, std::move(samples), 0);
    return tree;
  }

private:
  struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double criterion = 0.0;
  };

  std::int32_t grow(Tree& tree, std::vector<std::size_t> samples, int depth) {
    const auto index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    fill_leaf(tree.nodes.back(), samples);

    if (depth >= params_.max_depth ||
        samples.size() < 2 * static_cast<std::size_t>(params_.min_samples_leaf)) {
      return index;
    }

    double parent = node_criterion(samples);
    if (parent <= 1e-12) return index;  // pure node

    Split best = find_split(samples, parent);
    if (!best.found) return index;

    std::vector<std::size_t> left, right;
    left.reserve(samples.size());
    for (std::size_t s : samples) {
      (cv_.columns[best.feature][s] <= best.threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();

    std::int32_t l = grow(tree, std::move(left), depth + 1);
    std::int32_t r = grow(tree, std::move(right), depth + 1);
    TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    node.feature = static_cast<std::int32_t>(best.feature);
    node.threshold = best.threshold;
    node.left = l;
    node.right = r;
    return index;
  }

  void fill_leaf(TreeNode& node, const std::vector<std::size_t>& samples) {
    if (ds_.kind == TaskKind::Classification) {
      node.class_counts.assign(n_classes_, 0.0);
      for (std::size_t s : samples) node.class_counts[ds_.rows[s].class_index] += 1.0;
    } else {
      double sum = 0.0;
      for (std::size_t s : samples) sum += ds_.rows[s].target.num;
      node.value = samples.empty() ? 0.0 : sum / static_cast<double>(samples.size());
    }
  }

  // Gini impurity scaled by sample count (classification) or shifted sum of
  // squared deviations (regression); both are additive across children, so
  // a split is kept only when left + right drops strictly below the parent.
  double node_criterion(const std::vector<std::size_t>& samples) {
    if (ds_.kind == TaskKind::Classification) {
      std::vector<double> counts(n_classes_, 0.0);
      for (std::size_t s : samples) counts[ds_.rows[s].class_index] += 1.0;
      return gini_sum(counts, static_cast<double>(samples.size()));
    }
    shift_ = 0.0;
    for (std::size_t s : samples) shift_ += ds_.rows[s].target.num;
    shift_ /= static_cast<double>(samples.size());
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t s : samples) {
      double y = ds_.rows[s].target.num - shift_;
      sum += y;
      sumsq += y * y;
    }
    return sumsq - sum * sum / static_cast<double>(samples.size());
  }

  static double gini_sum(const std::vector<double>& counts, double n) {
    if (n <= 0) return 0.0;
    double sq = 0.0;
    for (double c : counts) sq += c * c;
    return n - sq / n;
  }

  std::vector<std::size_t> candidate_features() {
    const std::size_t m = cv_.columns.size();
    if (rng_ == nullptr || features_per_split_ >= m) {
      std::vector<std::size_t> all(m);
      for (std::size_t f = 0; f < m; ++f) all[f] = f;
      return all;
    }
    // partial Fisher-Yates over a scratch identity permutation
    std::vector<std::size_t> pool(m);
    for (std::size_t f = 0; f < m; ++f) pool[f] = f;
    std::vector<std::size_t> chosen;
    chosen.reserve(features_per_split_);
    for (std::size_t i = 0; i < features_per_split_; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng_->bounded(m - i));
      std::swap(pool[i], pool[j]);
      chosen.push_back(pool[i]);
    }
    std::sort(chosen.begin(), chosen.end());  // scan order independent of draw order
    return chosen;
  }

  Split find_split(const std::vector<std::size_t>& samples, double parent) {
    Split best;
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    const double n = static_cast<double>(samples.size());
    (void)n;

    std::vector<double> total_counts;
    double total_sum = 0.0, total_sumsq = 0.0;
    if (ds_.kind == TaskKind::Classification) {
      total_counts.assign(n_classes_, 0.0);
      for (std::size_t s : samples) total_counts[ds_.rows[s].class_index] += 1.0;
    } else {
      for (std::size_t s : samples) {
        double y = ds_.rows[s].target.num - shift_;
        total_sum += y;
        total_sumsq += y * y;
      }
    }

    std::vector<std::pair<double, std::size_t>> sorted;
    sorted.reserve(samples.size());
    std::vector<double> left_counts;

    for (std::size_t f : candidate_features()) {
      const std::vector<double>& col = cv_.columns[f];
      sorted.clear();
      for (std::size_t s : samples) sorted.emplace_back(col[s], s);
      std::sort(sorted.begin(), sorted.end());  // value, then row id: deterministic

      if (sorted.front().first == sorted.back().first) continue;  // constant feature

      double left_sum = 0.0, left_sumsq = 0.0;
      std::size_t left_n = 0;
      if (ds_.kind == TaskKind::Classification) left_counts.assign(n_classes_, 0.0);

      for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        const std::size_t s = sorted[i].second;
        if (ds_.kind == TaskKind::Classification) {
          left_counts[ds_.rows[s].class_index] += 1.0;
        } else {
          double y = ds_.rows[s].target.num - shift_;
          left_sum += y;
          left_sumsq += y * y;
        }
        ++left_n;

        if (sorted[i].first == sorted[i + 1].first) continue;  // not a boundary
        const std::size_t right_n = samples.size() - left_n;
        if (left_n < min_leaf || right_n < min_leaf) continue;

        double criterion;
        if (ds_.kind == TaskKind::Classification) {
          double left_score = gini_sum(left_counts, static_cast<double>(left_n));
          double right_sq = 0.0;
          for (std::size_t c = 0; c < n_classes_; ++c) {
            double rc = total_counts[c] - left_counts[c];
            right_sq += rc * rc;
          }
          double right_score = static_cast<double>(right_n) - right_sq / static_cast<double>(right_n);
          criterion = left_score + right_score;
        } else {
          double right_sum = total_sum - left_sum;
          double right_sumsq = total_sumsq - left_sumsq;
          double left_score = left_sumsq - left_sum * left_sum / static_cast<double>(left_n);
          double right_score =
              right_sumsq - right_sum * right_sum / static_cast<double>(right_n);
          criterion = left_score + right_score;
        }

        const double threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2;
        // ties on the criterion go to the lowest feature index, then the
        // lowest threshold (both orders coincide with scan order)
        if (criterion < parent - 1e-12 &&
            (!best.found || criterion < best.criterion - 1e-12)) {
          best.found = true;
          best.feature = f;
          best.threshold = threshold;
          best.criterion = criterion;
        }
      }
    }
    return best;
  }

  const ColumnView& cv_;
  const Dataset& ds_;
  const TrainParams& params_;
  SplitMix64* rng_;
  std::size_t features_per_split_;
  std::size_t n_classes_;
  double shift_ = 0.0;  // regression target shift of the node being scanned
};

const TreeNode& descend(const Tree& tree, const std::vector<double>& x) {
  const TreeNode* node = &tree.nodes[0];
  while (node->feature >= 0) {
    node = x[static_cast<std::size_t>(node->feature)] <= node->threshold
               ? &tree.nodes[static_cast<std::size_t>(node->left)]
               : &tree.nodes[static_cast<std::size_t>(node->right)];
  }
  return *node;
}

std::size_t argmax_lowest(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

std::size_t features_per_split_of(const TrainParams& p, std::size_t m) {
  if (m == 0) return 0;
  if (p.feature_subsample <= 0.0) {
    auto k = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m))));
    return std::clamp<std::size_t>(k, 1, m);
  }
  auto k = static_cast<std::size_t>(std::ceil(p.feature_subsample * static_cast<double>(m)));
  return std::clamp<std::size_t>(k, 1, m);
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

Model Model::train(const Dataset& ds, Algorithm algorithm, const TrainParams& params) {
  if (ds.rows.empty()) throw DomainError("cannot train on an empty dataset");
  if (algorithm == Algorithm::LinearRegression && ds.kind != TaskKind::Regression) {
    throw DomainError("linearRegression requires a numeric (regression) rule");
  }

  Model model;
  model.algorithm_ = algorithm;
  model.task_ = ds.kind;
  model.schema_hash_ = ds.schema.hash();
  model.feature_names_ = ds.schema.names;
  model.class_labels_ = ds.class_labels;
  model.params_ = params;

  if (ds.kind == TaskKind::Regression) {
    auto targets = ds.numeric_targets();
    model.training_target_mean_ =
        kernels::sum(targets) / static_cast<double>(targets.size());
  }

  switch (algorithm) {
    case Algorithm::MeanBaseline: {
      ConstantModel c;
      if (ds.kind == TaskKind::Regression) {
        c.value = model.training_target_mean_;
      } else {
        std::vector<double> counts(ds.class_labels.size(), 0.0);
        for (const auto& row : ds.rows) counts[row.class_index] += 1.0;
        c.class_index = argmax_lowest(counts);
        c.scores.resize(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) {
          c.scores[i] = counts[i] / static_cast<double>(ds.rows.size());
        }
      }
      model.payload_ = std::move(c);
      return model;
    }

    case Algorithm::DecisionTree: {
      ColumnView cv = ColumnView::from(ds);
      TreeBuilder builder(cv, ds, params, nullptr, cv.columns.size());
      model.payload_ = TreeModel{builder.build(all_rows(ds.rows.size()))};
      return model;
    }

    case Algorithm::RandomForest: {
      if (params.n_trees < 1) throw DomainError("nTrees must be positive");
      ColumnView cv = ColumnView::from(ds);
      const std::size_t per_split = features_per_split_of(params, cv.columns.size());
      std::vector<Tree> trees(static_cast<std::size_t>(params.n_trees));
      parallel_for(trees.size(), params.workers, [&](std::size_t t) {
        SplitMix64 rng(params.rng_seed + t);
        std::vector<std::size_t> samples;
        if (params.bootstrap) {
          samples.resize(ds.rows.size());
          for (auto& s : samples) s = rng.bounded(ds.rows.size());
        } else {
          samples = all_rows(ds.rows.size());
        }
        const bool subsampling = per_split < cv.columns.size();
        TreeBuilder builder(cv, ds, params, subsampling ? &rng : nullptr, per_split);
        trees[t] = builder.build(std::move(samples));
      });
      model.payload_ = ForestModel{std::move(trees)};
      return model;
    }

    case Algorithm::LinearRegression: {
      const std::size_t m = ds.schema.names.size();
      // column-major design with a trailing intercept column
      std::vector<std::vector<double>> cols(m + 1, std::vector<double>(ds.rows.size()));
      for (std::size_t r = 0; r < ds.rows.size(); ++r) {
        for (std::size_t f = 0; f < m; ++f) cols[f][r] = ds.rows[r].features[f];
        cols[m][r] = 1.0;
      }
      auto y = ds.numeric_targets();

      const std::size_t dim = m + 1;
      std::vector<double> a(dim * dim, 0.0), b(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
          double v = kernels::dot(cols[i], cols[j]);
          a[i * dim + j] = v;
          a[j * dim + i] = v;
        }
        a[i * dim + i] += params.ridge_epsilon;
        b[i] = kernels::dot(cols[i], y);
      }

      // Cholesky: A = L L^T (A is positive definite after the ridge)
      std::vector<double> l(dim * dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          double s = a[i * dim + j];
          for (std::size_t p = 0; p < j; ++p) s -= l[i * dim + p] * l[j * dim + p];
          if (i == j) {
            if (s <= 0.0) throw DomainError("normal equations not positive definite");
            l[i * dim + i] = std::sqrt(s);
          } else {
            l[i * dim + j] = s / l[j * dim + j];
          }
        }
      }
      std::vector<double> z(dim, 0.0), w(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        double s = b[i];
        for (std::size_t p = 0; p < i; ++p) s -= l[i * dim + p] * z[p];
        z[i] = s / l[i * dim + i];
      }
      for (std::size_t ii = dim; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t p = ii + 1; p < dim; ++p) s -= l[p * dim + ii] * w[p];
        w[ii] = s / l[ii * dim + ii];
      }

      LinearModel lin;
      lin.coefficients.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(m));
      lin.intercept = w[m];
      model.payload_ = std::move(lin);
      return model;
    }
  }
  throw DomainError("unknown algorithm");
}

Prediction Model::predict(const FeatureVector& features) const {
  if (features.schema_hash != schema_hash_) {
    throw DomainError("feature vector schema hash does not match the model's schema");
  }
  if (features.values.size() != feature_names_.size()) {
    throw DomainError("feature vector length " + std::to_string(features.values.size()) +
                      " does not match the model's " + std::to_string(feature_names_.size()));
  }

  Prediction out;
  const auto finish_classification = [&](std::vector<double> scores) {
    out.scores = std::move(scores);
    out.class_index = argmax_lowest(out.scores);
    out.label = class_labels_.at(out.class_index);
  };

  if (const auto* c = std::get_if<ConstantModel>(&payload_)) {
    if (task_ == TaskKind::Regression) {
      out.value = c->value;
    } else {
      finish_classification(c->scores);
    }
    return out;
  }

  if (const auto* t = std::get_if<TreeModel>(&payload_)) {
    const TreeNode& leaf = descend(t->tree, features.values);
    if (task_ == TaskKind::Regression) {
      out.value = leaf.value;
    } else {
      double total = kernels::sum(leaf.class_counts);
      std::vector<double> scores(leaf.class_counts.size(), 0.0);
      if (total > 0) {
        for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = leaf.class_counts[i] / total;
      }
      finish_classification(std::move(scores));
    }
    return out;
  }

  if (const auto* f = std::get_if<ForestModel>(&payload_)) {
    if (task_ == TaskKind::Regression) {
      double sum = 0.0;
      for (const auto& tree : f->trees) sum += descend(tree, features.values).value;
      out.value = sum / static_cast<double>(f->trees.size());
    } else {
      std::vector<double> votes(class_labels_.size(), 0.0);
      for (const auto& tree : f->trees) {
        const TreeNode& leaf = descend(tree, features.values);
        votes[argmax_lowest(leaf.class_counts)] += 1.0;
      }
      for (auto& v : votes) v /= static_cast<double>(f->trees.size());
      finish_classification(std::move(votes));
    }
    return out;
  }

  const auto& lin = std::get<LinearModel>(payload_);
  out.value = kernels::dot(lin.coefficients, features.values) + lin.intercept;
  return out;
}

// --- persistence -----------------------------------------------------------------

namespace {

using json = nlohmann::ordered_json;

constexpr int kModelVersion = 1;

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json attr_to_json(const AttrValue& v) {
  switch (v.kind()) {
    case AttrValue::Kind::Str: return json{{"t", "str"}, {"v", v.text()}};
    case AttrValue::Kind::Num: return json{{"t", "num"}, {"v", v.number()}};
    case AttrValue::Kind::Bool: return json{{"t", "bool"}, {"v", v.truth()}};
    case AttrValue::Kind::Timestamp: return json{{"t", "ts"}, {"v", v.number()}};
    case AttrValue::Kind::Undefined: return json{{"t", "undef"}};
  }
  return json{};
}

AttrValue attr_from_json(const json& j) {
  const std::string t = j.at("t").get<std::string>();
  if (t == "str") return AttrValue::str(j.at("v").get<std::string>());
  if (t == "num") return AttrValue::num(j.at("v").get<double>());
  if (t == "bool") return AttrValue::boolean(j.at("v").get<bool>());
  if (t == "ts") return AttrValue::timestamp(j.at("v").get<double>());
  return AttrValue{};
}

json tree_to_json(const Tree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    json node{{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}};
    if (!n.class_counts.empty()) {
      node["c"] = n.class_counts;
    } else {
      node["v"] = n.value;
    }
    nodes.push_back(std::move(node));
  }
  return nodes;
}

Tree tree_from_json(const json& j) {
  Tree tree;
  for (const auto& nj : j) {
    TreeNode n;
    n.feature = nj.at("f").get<std::int32_t>();
    n.threshold = nj.at("t").get<double>();
    n.left = nj.at("l").get<std::int32_t>();
    n.right = nj.at("r").get<std::int32_t>();
    if (nj.contains("c")) {
      n.class_counts = nj.at("c").get<std::vector<double>>();
    } else {
      n.value = nj.at("v").get<double>();
    }
    tree.nodes.push_back(std::move(n));
  }
  return tree;
}

}  // namespace

struct ModelSerde {
  static json to_json(const Model& m, const FeatureEncoder& encoder) {
    json doc;
    doc["format"] = "procast-model";
    doc["version"] = kModelVersion;
    doc["algorithm"] = algorithm_name(m.algorithm_);
    doc["task"] = task_kind_name(m.task_);
    doc["schema_hash"] = hash_hex(m.schema_hash_);
    doc["feature_names"] = m.feature_names_;
    doc["class_labels"] = m.class_labels_;
    if (m.task_ == TaskKind::Regression) {
      doc["training_target_mean"] = m.training_target_mean_;
    }
    const TrainParams& p = m.params_;
    doc["params"] = json{{"max_depth", p.max_depth},
                         {"min_samples_leaf", p.min_samples_leaf},
                         {"n_trees", p.n_trees},
                         {"feature_subsample", p.feature_subsample},
                         {"rng_seed", p.rng_seed},
                         {"ridge_epsilon", p.ridge_epsilon},
                         {"bootstrap", p.bootstrap}};
    json encoders = json::array();
    for (const auto& spec : encoder.specs()) {
      encoders.push_back(json{{"id", spec.id},
                              {"kind", encoder_kind_name(spec.kind)},
                              {"attribute", spec.attribute}});
    }
    doc["encoders"] = std::move(encoders);
    json vocab = json::object();
    for (const auto& spec : encoder.specs()) {
      if (spec.kind == EncoderKind::TimeFeatures) continue;
      json values = json::array();
      for (const auto& v : encoder.vocabulary().values(spec.id)) {
        values.push_back(attr_to_json(v));
      }
      vocab[spec.id] = std::move(values);
    }
    doc["vocabulary"] = std::move(vocab);

    json payload;
    if (const auto* c = std::get_if<Model::ConstantModel>(&m.payload_)) {
      payload = json{{"value", c->value},
                     {"class_index", c->class_index},
                     {"scores", c->scores}};
    } else if (const auto* t = std::get_if<Model::TreeModel>(&m.payload_)) {
      payload = json{{"nodes", tree_to_json(t->tree)}};
    } else if (const auto* f = std::get_if<Model::ForestModel>(&m.payload_)) {
      json trees = json::array();
      for (const auto& tree : f->trees) trees.push_back(tree_to_json(tree));
      payload = json{{"trees", std::move(trees)}};
    } else {
      const auto& lin = std::get<Model::LinearModel>(m.payload_);
      payload = json{{"coefficients", lin.coefficients}, {"intercept", lin.intercept}};
    }
    doc["model"] = std::move(payload);
    return doc;
  }

  static LoadedModel from_json(const json& doc) {
    if (!doc.is_object() || doc.value("format", "") != "procast-model") {
      throw DomainError("not a procast model document");
    }
    if (doc.value("version", -1) != kModelVersion) {
      throw DomainError("unsupported model version " + std::to_string(doc.value("version", -1)));
    }

    std::vector<EncoderSpec> specs;
    for (const auto& ej : doc.at("encoders")) {
      EncoderSpec spec;
      spec.id = ej.at("id").get<std::string>();
      auto kind = encoder_kind_from_name(ej.at("kind").get<std::string>());
      if (!kind) throw DomainError("unknown encoder kind in model file");
      spec.kind = *kind;
      spec.attribute = ej.at("attribute").get<std::string>();
      specs.push_back(std::move(spec));
    }
    Vocabulary vocab;
    for (const auto& [spec_id, values] : doc.at("vocabulary").items()) {
      for (const auto& vj : values) vocab.add(spec_id, attr_from_json(vj));
    }
    FeatureEncoder encoder(std::move(specs), std::move(vocab));

    Model m;
    auto algo = algorithm_from_name(doc.at("algorithm").get<std::string>());
    if (!algo) throw DomainError("unknown algorithm in model file");
    m.algorithm_ = *algo;
    m.task_ = doc.at("task").get<std::string>() == "regression" ? TaskKind::Regression
                                                                : TaskKind::Classification;
    m.class_labels_ = doc.at("class_labels").get<std::vector<std::string>>();
    m.training_target_mean_ = doc.value("training_target_mean", 0.0);
    m.feature_names_ = doc.at("feature_names").get<std::vector<std::string>>();

    // the document must be self-consistent: its hash is the hash of its own
    // feature names (a stale or tampered encoder section still fails at
    // predict time, where the vector's hash is compared against this one)
    const std::string stored_hash = doc.at("schema_hash").get<std::string>();
    FeatureSchema stored_schema;
    stored_schema.names = m.feature_names_;
    m.schema_hash_ = stored_schema.hash();
    if (hash_hex(m.schema_hash_) != stored_hash) {
      throw DomainError("model file schema hash does not match its feature names "
                        "(corrupt or hand-edited document)");
    }

    const json& pj = doc.at("params");
    m.params_.max_depth = pj.at("max_depth").get<int>();
    m.params_.min_samples_leaf = pj.at("min_samples_leaf").get<int>();
    m.params_.n_trees = pj.at("n_trees").get<int>();
    m.params_.feature_subsample = pj.at("feature_subsample").get<double>();
    m.params_.rng_seed = pj.at("rng_seed").get<std::uint64_t>();
    m.params_.ridge_epsilon = pj.at("ridge_epsilon").get<double>();
    m.params_.bootstrap = pj.at("bootstrap").get<bool>();

    const json& mj = doc.at("model");
    switch (m.algorithm_) {
      case Algorithm::MeanBaseline: {
        Model::ConstantModel c;
        c.value = mj.at("value").get<double>();
        c.class_index = mj.at("class_index").get<std::size_t>();
        c.scores = mj.at("scores").get<std::vector<double>>();
        m.payload_ = std::move(c);
        break;
      }
      case Algorithm::DecisionTree:
        m.payload_ = Model::TreeModel{tree_from_json(mj.at("nodes"))};
        break;
      case Algorithm::RandomForest: {
        Model::ForestModel f;
        for (const auto& tj : mj.at("trees")) f.trees.push_back(tree_from_json(tj));
        m.payload_ = std::move(f);
        break;
      }
      case Algorithm::LinearRegression: {
        Model::LinearModel lin;
        lin.coefficients = mj.at("coefficients").get<std::vector<double>>();
        lin.intercept = mj.at("intercept").get<double>();
        m.payload_ = std::move(lin);
        break;
      }
    }
    return LoadedModel{std::move(m), std::move(encoder)};
  }
};

void save_model(const Model& model, const FeatureEncoder& encoder, std::ostream& out) {
  out << ModelSerde::to_json(model, encoder).dump(2) << '\n';
}

void save_model_file(const Model& model, const FeatureEncoder& encoder,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write model file: " + path);
  save_model(model, encoder, out);
}

LoadedModel load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(std::string("cannot parse model document: ") + e.what());
  }
  try {
    return ModelSerde::from_json(doc);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed model document: ") + e.what());
  }
}

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file: " + path);
  try {
    return load_model(in);
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

}  // namespace procast
