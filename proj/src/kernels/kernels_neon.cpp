#if defined(SPOOFDET_HAVE_NEON)

#include <arm_neon.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace spoofdet::kernels {
namespace {

double reduce_sum(std::span<const double> x) {
    const std::size_t n = x.size();
    const double* p = x.data();
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(p + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += p[i];
    return s;
}

double reduce_sumsq(std::span<const double> x) {
    const std::size_t n = x.size();
    const double* p = x.data();
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(p + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += p[i] * p[i];
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(x.data() + i), vld1q_f64(y.data() + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double max_l1_3(std::span<const double> x, std::span<const double> y,
                std::span<const double> z) {
    const std::size_t n = x.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t l1 = vaddq_f64(
            vaddq_f64(vabsq_f64(vld1q_f64(x.data() + i)),
                      vabsq_f64(vld1q_f64(y.data() + i))),
            vabsq_f64(vld1q_f64(z.data() + i)));
        acc = vmaxq_f64(acc, l1);
    }
    double m = vmaxvq_f64(acc);
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
    const float64x2_t vux = vdupq_n_f64(ux);
    const float64x2_t vuy = vdupq_n_f64(uy);
    const float64x2_t vuz = vdupq_n_f64(uz);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t acc = vmulq_f64(vux, vld1q_f64(x.data() + i));
        acc = vfmaq_f64(acc, vuy, vld1q_f64(y.data() + i));
        acc = vfmaq_f64(acc, vuz, vld1q_f64(z.data() + i));
        vst1q_f64(out.data() + i, acc);
    }
    for (; i < n; ++i) out[i] = ux * x[i] + uy * y[i] + uz * z[i];
}

double allan_sumsq(std::span<const double> theta, std::size_t m) {
    const std::size_t n = theta.size();
    if (n < 2 * m + 1) return 0.0;
    const std::size_t cnt = n - 2 * m;
    const double* p = theta.data();
    const float64x2_t two = vdupq_n_f64(2.0);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= cnt; i += 2) {
        float64x2_t a = vld1q_f64(p + i + 2 * m);
        float64x2_t b = vld1q_f64(p + i + m);
        float64x2_t c = vld1q_f64(p + i);
        float64x2_t d = vaddq_f64(vfmsq_f64(a, two, b), c);
        acc = vfmaq_f64(acc, d, d);
    }
    double s = vaddvq_f64(acc);
    for (; i < cnt; ++i) {
        const double d = p[i + 2 * m] - 2.0 * p[i + m] + p[i];
        s += d * d;
    }
    return s;
}

const Table kNeonTable = {
    reduce_sum, reduce_sumsq, dot, max_l1_3, project3, allan_sumsq,
};

}  // namespace

const Table* neon_table() { return &kNeonTable; }

}  // namespace spoofdet::kernels

#endif  // SPOOFDET_HAVE_NEON
