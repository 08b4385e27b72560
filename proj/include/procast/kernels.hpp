#pragma once

#include <cstddef>
#include <span>

namespace procast::kernels {

// Dense double reductions behind the learners and metrics: scalar reference
// implementations plus AVX2 variants picked once at startup by CPU feature
// detection. SIMD results may differ from scalar in the last bits
// (different summation order); the equivalence tests bound that.

enum class Backend { Scalar, Avx2 };

/// Backend selected for this process (Avx2 only when the CPU supports it).
Backend active_backend();
const char* backend_name(Backend b);

/// Test hook; pass Scalar to force the reference path. Avx2 on a CPU
/// without it throws DomainError.
void force_backend(Backend b);

double sum(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
/// Σ|a_i - b_i|
double abs_diff_sum(std::span<const double> a, std::span<const double> b);
/// Σ(a_i - b_i)²
double sq_diff_sum(std::span<const double> a, std::span<const double> b);

namespace detail {
double sum_scalar(std::span<const double> a);
double dot_scalar(std::span<const double> a, std::span<const double> b);
double abs_diff_sum_scalar(std::span<const double> a, std::span<const double> b);
double sq_diff_sum_scalar(std::span<const double> a, std::span<const double> b);
}  // namespace detail

}  // namespace procast::kernels
