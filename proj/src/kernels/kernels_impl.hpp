#pragma once

#include <cstddef>
#include <span>

// Internal dispatch table shared between the reference and SIMD translation
// units. Not installed; include only from src/kernels.
namespace spoofdet::kernels {

struct Table {
    double (*reduce_sum)(std::span<const double>);
    double (*reduce_sumsq)(std::span<const double>);
    double (*dot)(std::span<const double>, std::span<const double>);
    double (*max_l1_3)(std::span<const double>, std::span<const double>,
                       std::span<const double>);
    void (*project3)(std::span<const double>, std::span<const double>,
                     std::span<const double>, double, double, double,
                     std::span<double>);
    double (*allan_sumsq)(std::span<const double>, std::size_t);
};

#if defined(SPOOFDET_HAVE_AVX2)
const Table* avx2_table();
#endif
#if defined(SPOOFDET_HAVE_NEON)
const Table* neon_table();
#endif

}  // namespace spoofdet::kernels
