#if defined(SPOOFDET_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace spoofdet::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

double reduce_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    const double* p = x.data();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += p[i];
    return s;
}

double reduce_sumsq(std::span<const double> x) {
    const std::size_t n = x.size();
    const double* p = x.data();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += p[i] * p[i];
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    const double* px = x.data();
    const double* py = y.data();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += px[i] * py[i];
    return s;
}

double max_l1_3(std::span<const double> x, std::span<const double> y,
                std::span<const double> z) {
    const std::size_t n = x.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d l1 = _mm256_add_pd(
            _mm256_add_pd(abs_pd(_mm256_loadu_pd(x.data() + i)),
                          abs_pd(_mm256_loadu_pd(y.data() + i))),
            abs_pd(_mm256_loadu_pd(z.data() + i)));
        acc = _mm256_max_pd(acc, l1);
    }
    double m = hmax(acc);
    for (; i < n; ++i) {
        const double l1 = std::fabs(x[i]) + std::fabs(y[i]) + std::fabs(z[i]);
        if (l1 > m) m = l1;
    }
    return m;
}

void project3(std::span<const double> x, std::span<const double> y,
              std::span<const double> z, double ux, double uy, double uz,
              std::span<double> out) {
    const std::size_t n = x.size();
    const __m256d vux = _mm256_set1_pd(ux);
    const __m256d vuy = _mm256_set1_pd(uy);
    const __m256d vuz = _mm256_set1_pd(uz);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_mul_pd(vux, _mm256_loadu_pd(x.data() + i));
        acc = _mm256_fmadd_pd(vuy, _mm256_loadu_pd(y.data() + i), acc);
        acc = _mm256_fmadd_pd(vuz, _mm256_loadu_pd(z.data() + i), acc);
        _mm256_storeu_pd(out.data() + i, acc);
    }
    for (; i < n; ++i) out[i] = ux * x[i] + uy * y[i] + uz * z[i];
}

double allan_sumsq(std::span<const double> theta, std::size_t m) {
    const std::size_t n = theta.size();
    if (n < 2 * m + 1) return 0.0;
    const std::size_t cnt = n - 2 * m;
    const double* p = theta.data();
    const __m256d two = _mm256_set1_pd(2.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= cnt; i += 4) {
        __m256d a = _mm256_loadu_pd(p + i + 2 * m);
        __m256d b = _mm256_loadu_pd(p + i + m);
        __m256d c = _mm256_loadu_pd(p + i);
        __m256d d = _mm256_add_pd(_mm256_fnmadd_pd(two, b, a), c);
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < cnt; ++i) {
        const double d = p[i + 2 * m] - 2.0 * p[i + m] + p[i];
        s += d * d;
    }
    return s;
}

const Table kAvx2Table = {
    reduce_sum, reduce_sumsq, dot, max_l1_3, project3, allan_sumsq,
};

}  // namespace

const Table* avx2_table() { return &kAvx2Table; }

}  // namespace spoofdet::kernels

#endif  // SPOOFDET_HAVE_AVX2
