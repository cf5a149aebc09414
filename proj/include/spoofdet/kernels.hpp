#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel inner loops used by the IMU/carrier stream processing.
// Each operation has a scalar reference implementation plus SIMD variants
// (AVX2 on x86-64, NEON on arm64) selected once at runtime. The SIMD
// variants may reassociate sums, so results can differ from the scalar
// path at rounding level; the equivalence tests bound that difference.
namespace spoofdet::kernels {

enum class Impl { Scalar, Avx2, Neon };

// Implementation currently routing the calls below.
Impl active_impl();

// Force a specific implementation (tests use this to compare variants).
// Requesting an unsupported one falls back to Scalar.
void force_impl(Impl impl);

// Re-run hardware detection, undoing force_impl.
void reset_impl();

std::string impl_name(Impl impl);

// sum(x)
double reduce_sum(std::span<const double> x);

// sum(x^2)
double reduce_sumsq(std::span<const double> x);

// dot(x, y); x and y must have equal length
double dot(std::span<const double> x, std::span<const double> y);

// max over k of |x[k]| + |y[k]| + |z[k]| (L1 norm of a 3-axis stream);
// 0 for empty input
double max_l1_3(std::span<const double> x, std::span<const double> y,
                std::span<const double> z);

// out[k] = ux*x[k] + uy*y[k] + uz*z[k]
void project3(std::span<const double> x, std::span<const double> y,
              std::span<const double> z, double ux, double uy, double uz,
              std::span<double> out);

// sum over i of (theta[i+2m] - 2*theta[i+m] + theta[i])^2,
// i = 0 .. n-2m-1; the overlapping Allan variance accumulator
double allan_sumsq(std::span<const double> theta, std::size_t m);

}  // namespace spoofdet::kernels
