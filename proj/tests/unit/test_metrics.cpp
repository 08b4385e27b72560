#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "procast/errors.hpp"
#include "procast/metrics.hpp"

using namespace procast;

namespace {

// independent oracle: enumerate all positive/negative pairs
double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  double concordant = 0, ties = 0, pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1;
      if (scores[i] > scores[j]) concordant += 1;
      if (scores[i] == scores[j]) ties += 1;
    }
  }
  return (concordant + 0.5 * ties) / pairs;
}

}  // namespace

TEST_CASE("auc: separable, tied, and the four-point example") {
  std::vector<double> s1{0.9, 0.1};
  std::vector<int> l1{1, 0};
  CHECK(*auc(s1, l1) == 1.0);

  std::vector<double> s2{0.5, 0.5};
  std::vector<int> l2{1, 0};
  CHECK(*auc(s2, l2) == 0.5);

  std::vector<double> s3{0.8, 0.6, 0.4, 0.2};
  std::vector<int> l3{1, 0, 1, 0};
  double v = *auc(s3, l3);
  CHECK(std::fabs(v - 0.75) < 1e-12);
  CHECK(v == pairwise_auc(s3, l3));
}

TEST_CASE("auc: single-class labels are not applicable") {
  std::vector<double> s{0.3, 0.7};
  std::vector<int> ones{1, 1}, zeros{0, 0};
  CHECK_FALSE(auc(s, ones).has_value());
  CHECK_FALSE(auc(s, zeros).has_value());
}

TEST_CASE("property: auc equals the pairwise oracle and survives monotone transforms") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> d(0, 1);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = 2 + rng() % 40;
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = std::round(d(rng) * 8) / 8;  // force ties
      labels[i] = rng() % 2;
      (labels[i] ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) continue;

    double base = *auc(scores, labels);
    CHECK(std::fabs(base - pairwise_auc(scores, labels)) < 1e-12);

    std::vector<double> transformed(n);
    for (std::size_t i = 0; i < n; ++i) transformed[i] = std::exp(3 * scores[i]) + 7;
    CHECK(std::fabs(*auc(transformed, labels) - base) < 1e-12);
  }
}

TEST_CASE("mae_rmse: worked examples") {
  std::vector<double> pred{2, 2}, truth{2, 4};
  auto [mae, rmse] = mae_rmse(pred, truth);
  CHECK(mae == 1.0);
  CHECK(rmse == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  std::vector<double> same{1, 2, 3};
  auto [m0, r0] = mae_rmse(same, same);
  CHECK(m0 == 0.0);
  CHECK(r0 == 0.0);

  std::vector<double> one{0}, three{3};
  auto [m3, r3] = mae_rmse(one, three);
  CHECK(m3 == 3.0);
  CHECK(r3 == 3.0);

  std::vector<double> empty;
  CHECK_THROWS_AS(mae_rmse(empty, empty), DomainError);
}

TEST_CASE("property: MAE <= RMSE, equality only for uniform errors") {
  std::mt19937_64 rng(321);
  std::uniform_real_distribution<double> d(-100, 100);
  for (int rep = 0; rep < 1000; ++rep) {
    std::size_t n = 1 + rng() % 20;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = d(rng);
      b[i] = d(rng);
    }
    auto [mae, rmse] = mae_rmse(a, b);
    CHECK(mae <= rmse + 1e-12);
  }

  std::vector<double> p{0, 0, 0}, t{2, -2, 2};  // all |errors| equal
  auto [mae, rmse] = mae_rmse(p, t);
  CHECK(mae == doctest::Approx(rmse).epsilon(1e-12));
}

TEST_CASE("multiclass_auc: binary reduction, perfect separation, uniform scores") {
  // two classes: must match binary auc on the positive-class score
  std::vector<std::vector<double>> scores2{{0.2, 0.7, 0.4, 0.9}, {0.8, 0.3, 0.6, 0.1}};
  std::vector<std::size_t> labels2{1, 0, 1, 0};
  std::vector<int> binary{1, 0, 1, 0};
  CHECK(*multiclass_auc(scores2, labels2) == doctest::Approx(*auc(scores2[1], binary)));

  // three perfectly separated classes
  std::vector<std::vector<double>> scores3{{0.9, 0.1, 0.1}, {0.05, 0.8, 0.1}, {0.05, 0.1, 0.8}};
  std::vector<std::size_t> labels3{0, 1, 2};
  CHECK(*multiclass_auc(scores3, labels3) == 1.0);

  // uniform scores carry no information
  std::vector<std::vector<double>> flat{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}};
  std::vector<std::size_t> mixed{0, 1, 0};
  CHECK(*multiclass_auc(flat, mixed) == 0.5);

  // single class present -> not applicable
  std::vector<std::size_t> single{0, 0, 0};
  CHECK_FALSE(multiclass_auc(flat, single).has_value());
}
