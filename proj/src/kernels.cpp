#include "procast/kernels.hpp"

#include <cassert>
#include <cmath>

#include "procast/errors.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define PROCAST_X86 1
#include <immintrin.h>
#else
#define PROCAST_X86 0
#endif

namespace procast::kernels {

namespace detail {

double sum_scalar(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double abs_diff_sum_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double sq_diff_sum_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace detail

#if PROCAST_X86

namespace {

__attribute__((target("avx2"))) double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

__attribute__((target("avx2"))) double sum_avx2(std::span<const double> a) {
  std::size_t n = a.size(), i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a.data() + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

__attribute__((target("avx2"))) double dot_avx2(std::span<const double> a,
                                                std::span<const double> b) {
  std::size_t n = a.size(), i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc,
                        _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

__attribute__((target("avx2"))) double abs_diff_sum_avx2(std::span<const double> a,
                                                         std::span<const double> b) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t n = a.size(), i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

__attribute__((target("avx2"))) double sq_diff_sum_avx2(std::span<const double> a,
                                                        std::span<const double> b) {
  std::size_t n = a.size(), i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

#endif  // PROCAST_X86

namespace {

struct Dispatch {
  Backend backend;
  double (*sum)(std::span<const double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*abs_diff_sum)(std::span<const double>, std::span<const double>);
  double (*sq_diff_sum)(std::span<const double>, std::span<const double>);
};

constexpr Dispatch kScalar{Backend::Scalar, detail::sum_scalar, detail::dot_scalar,
                           detail::abs_diff_sum_scalar, detail::sq_diff_sum_scalar};

#if PROCAST_X86
constexpr Dispatch kAvx2{Backend::Avx2, sum_avx2, dot_avx2, abs_diff_sum_avx2,
                         sq_diff_sum_avx2};
#endif

bool cpu_has_avx2() {
#if PROCAST_X86
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Dispatch g_dispatch = [] {
#if PROCAST_X86
  if (cpu_has_avx2()) return kAvx2;
#endif
  return kScalar;
}();

}  // namespace

Backend active_backend() { return g_dispatch.backend; }

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void force_backend(Backend b) {
  if (b == Backend::Scalar) {
    g_dispatch = kScalar;
    return;
  }
#if PROCAST_X86
  if (cpu_has_avx2()) {
    g_dispatch = kAvx2;
    return;
  }
#endif
  throw DomainError("avx2 backend not available on this CPU");
}

double sum(std::span<const double> a) { return g_dispatch.sum(a); }
double dot(std::span<const double> a, std::span<const double> b) { return g_dispatch.dot(a, b); }
double abs_diff_sum(std::span<const double> a, std::span<const double> b) {
  return g_dispatch.abs_diff_sum(a, b);
}
double sq_diff_sum(std::span<const double> a, std::span<const double> b) {
  return g_dispatch.sq_diff_sum(a, b);
}

}  // namespace procast::kernels
