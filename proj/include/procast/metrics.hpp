#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace procast {

/// Area under the ROC curve as the Mann-Whitney rank statistic
/// (concordant + 0.5 * tied) / (positives * negatives), average ranks for
/// tied scores. Returns nullopt when only one class is present.
std::optional<double> auc(std::span<const double> scores, std::span<const int> labels);

/// Macro-averaged one-vs-rest AUC over the classes present in `labels`.
/// `per_class_scores[c]` holds each sample's score for class c. Returns
/// nullopt when fewer than two classes occur.
std::optional<double> multiclass_auc(const std::vector<std::vector<double>>& per_class_scores,
                                     std::span<const std::size_t> labels);

/// (MAE, RMSE); throws DomainError on empty or mismatched input.
std::pair<double, double> mae_rmse(std::span<const double> predictions,
                                   std::span<const double> truths);

}  // namespace procast
