#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "procast/kernels.hpp"

using namespace procast;

namespace {

struct BackendGuard {
  kernels::Backend saved;
  BackendGuard() : saved(kernels::active_backend()) {}
  ~BackendGuard() { kernels::force_backend(saved); }
};

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("kernels: scalar reference values on small exact inputs") {
  std::vector<double> a{1, 2, 3, 4, 5};
  std::vector<double> b{2, 2, 2, 2, 2};
  CHECK(kernels::detail::sum_scalar(a) == 15.0);
  CHECK(kernels::detail::dot_scalar(a, b) == 30.0);
  CHECK(kernels::detail::abs_diff_sum_scalar(a, b) == (1 + 0 + 1 + 2 + 3));
  CHECK(kernels::detail::sq_diff_sum_scalar(a, b) == (1 + 0 + 1 + 4 + 9));
}

TEST_CASE("kernels: dispatched backend matches scalar on integer-valued data exactly") {
  BackendGuard guard;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> d(-8, 8);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 129u}) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = d(rng);
      b[i] = d(rng);
    }
    // small integers: both summation orders are exact
    CHECK(kernels::sum(a) == kernels::detail::sum_scalar(a));
    CHECK(kernels::dot(a, b) == kernels::detail::dot_scalar(a, b));
    CHECK(kernels::abs_diff_sum(a, b) == kernels::detail::abs_diff_sum_scalar(a, b));
    CHECK(kernels::sq_diff_sum(a, b) == kernels::detail::sq_diff_sum_scalar(a, b));
  }
}

TEST_CASE("kernels: simd and scalar agree within rounding on real data") {
  BackendGuard guard;
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t n = 1 + static_cast<std::size_t>(rng() % 300);
    auto a = random_vec(rng, n, 1e6);
    auto b = random_vec(rng, n, 1e6);
    const double tol = 1e-9 * (1.0 + static_cast<double>(n)) * 1e6;

    CHECK(std::fabs(kernels::sum(a) - kernels::detail::sum_scalar(a)) <= tol);
    CHECK(std::fabs(kernels::abs_diff_sum(a, b) -
                    kernels::detail::abs_diff_sum_scalar(a, b)) <= tol);
    const double dot_tol = 1e-9 * (1.0 + static_cast<double>(n)) * 1e12;
    CHECK(std::fabs(kernels::dot(a, b) - kernels::detail::dot_scalar(a, b)) <= dot_tol);
    CHECK(std::fabs(kernels::sq_diff_sum(a, b) -
                    kernels::detail::sq_diff_sum_scalar(a, b)) <= dot_tol);
  }
}

TEST_CASE("kernels: backend can be forced to scalar and back") {
  BackendGuard guard;
  kernels::force_backend(kernels::Backend::Scalar);
  CHECK(kernels::active_backend() == kernels::Backend::Scalar);
  std::vector<double> a{1.5, 2.5};
  CHECK(kernels::sum(a) == 4.0);
}
