#include "spoofdet/kernels.hpp"

#include <atomic>
#include <cmath>

#include "kernels_impl.hpp"

namespace spoofdet::kernels {

namespace scalar {

double reduce_sum(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

double reduce_sumsq(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double max_l1_3(std::span<const double> x, std::span<const double> y,
                std::span<const double> z) {
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double l1 = std::fabs(x[i]) + std::fabs(y[i]) + std::fabs(z[i]);
        if (l1 > m) m = l1;
    }
    return m;
}

void project3(std::span<const double> x, std::span<const double> y,
              std::span<const double> z, double ux, double uy, double uz,
              std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = ux * x[i] + uy * y[i] + uz * z[i];
}

double allan_sumsq(std::span<const double> theta, std::size_t m) {
    const std::size_t n = theta.size();
    if (n < 2 * m + 1) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i + 2 * m < n; ++i) {
        const double d = theta[i + 2 * m] - 2.0 * theta[i + m] + theta[i];
        s += d * d;
    }
    return s;
}

}  // namespace scalar

namespace {

const Table kScalarTable = {
    scalar::reduce_sum, scalar::reduce_sumsq, scalar::dot,
    scalar::max_l1_3,   scalar::project3,     scalar::allan_sumsq,
};

struct Dispatch {
    Impl impl;
    const Table* table;
};

Dispatch detect() {
#if defined(SPOOFDET_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) return {Impl::Avx2, avx2_table()};
#endif
#if defined(SPOOFDET_HAVE_NEON)
    return {Impl::Neon, neon_table()};
#endif
    return {Impl::Scalar, &kScalarTable};
}

std::atomic<const Table*> g_table{nullptr};
std::atomic<Impl> g_impl{Impl::Scalar};

const Table& table() {
    const Table* t = g_table.load(std::memory_order_acquire);
    if (!t) {
        Dispatch d = detect();
        g_impl.store(d.impl, std::memory_order_relaxed);
        g_table.store(d.table, std::memory_order_release);
        t = d.table;
    }
    return *t;
}

}  // namespace

Impl active_impl() {
    table();
    return g_impl.load(std::memory_order_relaxed);
}

void force_impl(Impl impl) {
    const Table* t = &kScalarTable;
    Impl chosen = Impl::Scalar;
#if defined(SPOOFDET_HAVE_AVX2)
    if (impl == Impl::Avx2 && __builtin_cpu_supports("avx2")) {
        t = avx2_table();
        chosen = Impl::Avx2;
    }
#endif
#if defined(SPOOFDET_HAVE_NEON)
    if (impl == Impl::Neon) {
        t = neon_table();
        chosen = Impl::Neon;
    }
#endif
    (void)impl;
    g_impl.store(chosen, std::memory_order_relaxed);
    g_table.store(t, std::memory_order_release);
}

void reset_impl() {
    Dispatch d = detect();
    g_impl.store(d.impl, std::memory_order_relaxed);
    g_table.store(d.table, std::memory_order_release);
}

std::string impl_name(Impl impl) {
    switch (impl) {
        case Impl::Avx2: return "avx2";
        case Impl::Neon: return "neon";
        default: return "scalar";
    }
}

double reduce_sum(std::span<const double> x) { return table().reduce_sum(x); }
double reduce_sumsq(std::span<const double> x) { return table().reduce_sumsq(x); }
double dot(std::span<const double> x, std::span<const double> y) {
    return table().dot(x, y);
}
double max_l1_3(std::span<const double> x, std::span<const double> y,
                std::span<const double> z) {
    return table().max_l1_3(x, y, z);
}
void project3(std::span<const double> x, std::span<const double> y,
              std::span<const double> z, double ux, double uy, double uz,
              std::span<double> out) {
    table().project3(x, y, z, ux, uy, uz, out);
}
double allan_sumsq(std::span<const double> theta, std::size_t m) {
    return table().allan_sumsq(theta, m);
}

}  // namespace spoofdet::kernels
