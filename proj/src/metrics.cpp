#include "procast/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "procast/errors.hpp"
#include "procast/kernels.hpp"

namespace procast {

std::optional<double> auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DomainError("auc: size mismatch");
  std::size_t pos = 0, neg = 0;
  for (int l : labels) (l != 0 ? pos : neg) += 1;
  if (pos == 0 || neg == 0) return std::nullopt;

  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // average ranks within tied score runs, accumulate the positive rank sum
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (labels[order[t]] != 0) pos_rank_sum += avg_rank;
    }
    i = j + 1;
  }

  const double p = static_cast<double>(pos), n = static_cast<double>(neg);
  return (pos_rank_sum - p * (p + 1) / 2.0) / (p * n);
}

std::optional<double> multiclass_auc(const std::vector<std::vector<double>>& per_class_scores,
                                     std::span<const std::size_t> labels) {
  const std::size_t n_classes = per_class_scores.size();
  std::vector<std::size_t> class_count(n_classes, 0);
  for (std::size_t l : labels) {
    if (l < n_classes) ++class_count[l];
  }

  double total = 0.0;
  std::size_t contributing = 0;
  std::vector<int> binary(labels.size());
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (class_count[c] == 0) continue;  // class absent from this slice
    for (std::size_t i = 0; i < labels.size(); ++i) binary[i] = labels[i] == c ? 1 : 0;
    auto a = auc(per_class_scores[c], binary);
    if (!a) continue;  // everything in this slice belongs to c
    total += *a;
    ++contributing;
  }
  if (contributing == 0) return std::nullopt;
  return total / static_cast<double>(contributing);
}

std::pair<double, double> mae_rmse(std::span<const double> predictions,
                                   std::span<const double> truths) {
  if (predictions.size() != truths.size()) throw DomainError("mae_rmse: size mismatch");
  if (predictions.empty()) throw DomainError("mae_rmse: empty input");
  const double n = static_cast<double>(predictions.size());
  const double mae = kernels::abs_diff_sum(predictions, truths) / n;
  const double rmse = std::sqrt(kernels::sq_diff_sum(predictions, truths) / n);
  return {mae, rmse};
}

}  // namespace procast
