#include "spoofdet/imu.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "spoofdet/kernels.hpp"

namespace spoofdet::imu {
namespace {

// Shortest-arc quaternion rotating unit vector `from` onto unit vector `to`.
Eigen::Quaterniond between(const Eigen::Vector3d& from,
                           const Eigen::Vector3d& to) {
    const double c = from.dot(to);
    if (c < -1.0 + 1e-12) {
        // Antiparallel: pick any axis orthogonal to `from`.
        Eigen::Vector3d axis = from.unitOrthogonal();
        return Eigen::Quaterniond(Eigen::AngleAxisd(std::numbers::pi, axis));
    }
    Eigen::Quaterniond q(1.0 + c, from.y() * to.z() - from.z() * to.y(),
                         from.z() * to.x() - from.x() * to.z(),
                         from.x() * to.y() - from.y() * to.x());
    q.normalize();
    return q;
}

Eigen::Quaterniond initial_orientation(const ImuSample& s) {
    Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
    const double fn = s.specific_force.norm();
    if (fn > 1e-6) {
        q = between(s.specific_force / fn, Eigen::Vector3d::UnitZ());
    }
    if (s.magnetic && s.magnetic->norm() > 1e-3) {
        // Pin the heading: horizontal field component points north (+y).
        Eigen::Vector3d ml = q * s.magnetic->normalized();
        if (std::hypot(ml.x(), ml.y()) > 1e-6) {
            const double a = std::atan2(ml.x(), ml.y());
            q = Eigen::Quaterniond(Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ())) * q;
        }
    }
    return q;
}

// Gradient of the gravity-alignment objective f(q) = R(q)^T e_z - a_hat,
// stacked with the magnetometer objective R(q)^T m_ref - m_hat when a
// field measurement is available. Returns J^T f (unnormalized).
Eigen::Vector4d correction_gradient(const Eigen::Quaterniond& q,
                                    const Eigen::Vector3d& a_hat,
                                    const std::optional<Eigen::Vector3d>& m_hat) {
    const double w = q.w(), x = q.x(), y = q.y(), z = q.z();

    const double f1 = 2.0 * (x * z - w * y) - a_hat.x();
    const double f2 = 2.0 * (w * x + y * z) - a_hat.y();
    const double f3 = 1.0 - 2.0 * (x * x + y * y) - a_hat.z();

    Eigen::Vector4d g;
    g[0] = -2.0 * y * f1 + 2.0 * x * f2;
    g[1] = 2.0 * z * f1 + 2.0 * w * f2 - 4.0 * x * f3;
    g[2] = -2.0 * w * f1 + 2.0 * z * f2 - 4.0 * y * f3;
    g[3] = 2.0 * x * f1 + 2.0 * y * f2;

    if (m_hat) {
        // Field reference in the local frame: (0, by, bz) with by >= 0,
        // i.e. the horizontal component defines north.
        const Eigen::Vector3d h = q * (*m_hat);
        const double by = std::hypot(h.x(), h.y());
        const double bz = h.z();

        const double u1 = 2.0 * by * (x * y + w * z) + 2.0 * bz * (x * z - w * y) - m_hat->x();
        const double u2 = by * (1.0 - 2.0 * (x * x + z * z)) + 2.0 * bz * (y * z + w * x) - m_hat->y();
        const double u3 = 2.0 * by * (y * z - w * x) + bz * (1.0 - 2.0 * (x * x + y * y)) - m_hat->z();

        g[0] += (2.0 * by * z - 2.0 * bz * y) * u1 + 2.0 * bz * x * u2 - 2.0 * by * x * u3;
        g[1] += (2.0 * by * y + 2.0 * bz * z) * u1 + (-4.0 * by * x + 2.0 * bz * w) * u2 +
                (-2.0 * by * w - 4.0 * bz * x) * u3;
        g[2] += (2.0 * by * x - 2.0 * bz * w) * u1 + 2.0 * bz * z * u2 +
                (2.0 * by * z - 4.0 * bz * y) * u3;
        g[3] += (2.0 * by * w + 2.0 * bz * x) * u1 + (-4.0 * by * z + 2.0 * bz * y) * u2 +
                2.0 * by * y * u3;
    }
    return g;
}

struct Biquad {
    double b0, b1, b2, a1, a2;
};

Biquad butter_highpass(double cutoff, double rate) {
    const double k = std::tan(std::numbers::pi * cutoff / rate);
    const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * k + k * k);
    Biquad f;
    f.b0 = norm;
    f.b1 = -2.0 * norm;
    f.b2 = norm;
    f.a1 = 2.0 * (k * k - 1.0) * norm;
    f.a2 = (1.0 - std::numbers::sqrt2 * k + k * k) * norm;
    return f;
}

// Direct-form-II-transposed pass with the internal state preloaded to the
// step-response steady state for x0, so a constant input produces exactly
// zero output from the first sample.
void biquad_pass(const Biquad& f, std::vector<double>& x) {
    if (x.empty()) return;
    const double x0 = x.front();
    double s1 = (f.b1 + f.b2) * x0 - (f.a1 + f.a2) * 0.0;
    double s2 = f.b2 * x0 - f.a2 * 0.0;
    // Steady state for constant input x0, output 0:
    //   s1 = (b1 + b2) x0 - (a1 + a2) y,  s2 = b2 x0 - a2 y,  y = 0.
    for (double& v : x) {
        const double y = f.b0 * v + s1;
        s1 = f.b1 * v - f.a1 * y + s2;
        s2 = f.b2 * v - f.a2 * y;
        v = y;
    }
}

}  // namespace

Eigen::Vector3d DisplacementSeries::displacement_at(double time) const {
    if (t.empty()) throw OutOfRange("displacement series is empty");
    if (time < t.front() - 1e-9 || time > t.back() + 1e-9) {
        throw OutOfRange("time outside displacement series span");
    }
    const auto it = std::upper_bound(t.begin(), t.end(), time);
    if (it == t.begin()) return {bx.front(), by.front(), bz.front()};
    if (it == t.end()) return {bx.back(), by.back(), bz.back()};
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double w = (time - t[i - 1]) / (t[i] - t[i - 1]);
    return {bx[i - 1] + w * (bx[i] - bx[i - 1]),
            by[i - 1] + w * (by[i] - by[i - 1]),
            bz[i - 1] + w * (bz[i] - bz[i - 1])};
}

std::vector<Attitude> estimate_attitude(std::span<const ImuSample> samples,
                                        double gain, double init_window) {
    if (gain <= 0.0) throw ParameterError("attitude gain must be positive");
    if (samples.empty() ||
        samples.back().t - samples.front().t < init_window) {
        throw InsufficientData("inertial stream shorter than the settling window");
    }

    std::vector<Attitude> out;
    out.reserve(samples.size());

    Eigen::Quaterniond q = initial_orientation(samples.front());
    const double t0 = samples.front().t;
    out.push_back({t0, q, init_window > 0.0});

    for (std::size_t k = 1; k < samples.size(); ++k) {
        const ImuSample& s = samples[k];
        const double dt = s.t - samples[k - 1].t;
        if (dt <= 0.0) throw ParameterError("inertial timestamps must increase");

        const Eigen::Vector3d& w = s.angular_rate;
        // qdot = 0.5 q (0, w)
        Eigen::Vector4d qdot;
        qdot[0] = 0.5 * (-q.x() * w.x() - q.y() * w.y() - q.z() * w.z());
        qdot[1] = 0.5 * (q.w() * w.x() + q.y() * w.z() - q.z() * w.y());
        qdot[2] = 0.5 * (q.w() * w.y() - q.x() * w.z() + q.z() * w.x());
        qdot[3] = 0.5 * (q.w() * w.z() + q.x() * w.y() - q.y() * w.x());

        const double fn = s.specific_force.norm();
        if (fn > 1e-6) {
            std::optional<Eigen::Vector3d> m_hat;
            if (s.magnetic && s.magnetic->norm() > 1e-3) {
                m_hat = s.magnetic->normalized();
            }
            Eigen::Vector4d g = correction_gradient(q, s.specific_force / fn, m_hat);
            const double gn = g.norm();
            if (gn > 1e-12) qdot -= gain * (g / gn);
        }

        q = Eigen::Quaterniond(q.w() + qdot[0] * dt, q.x() + qdot[1] * dt,
                               q.y() + qdot[2] * dt, q.z() + qdot[3] * dt);
        q.normalize();
        out.push_back({s.t, q, s.t - t0 < init_window});
    }
    return out;
}

Vec3Series linear_acceleration(std::span<const ImuSample> samples,
                               std::span<const Attitude> attitudes) {
    if (samples.size() != attitudes.size()) {
        throw AlignmentError("sample and attitude streams differ in length");
    }
    Vec3Series out;
    out.t.reserve(samples.size());
    out.x.reserve(samples.size());
    out.y.reserve(samples.size());
    out.z.reserve(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (std::abs(samples[k].t - attitudes[k].t) > 1e-9) {
            throw AlignmentError("sample and attitude timestamps disagree");
        }
        const Eigen::Vector3d a =
            attitudes[k].q * samples[k].specific_force -
            Eigen::Vector3d(0.0, 0.0, kGravity);
        out.t.push_back(samples[k].t);
        out.x.push_back(a.x());
        out.y.push_back(a.y());
        out.z.push_back(a.z());
    }
    return out;
}

std::vector<double> high_pass(std::span<const double> x, double cutoff,
                              double rate) {
    if (!(cutoff > 0.0) || !(cutoff < rate / 4.0)) {
        throw ParameterError("high-pass cutoff must lie in (0, rate/4)");
    }
    const std::size_t n = x.size();
    if (n < 2 || static_cast<double>(n - 1) / rate < 4.0 / cutoff) {
        throw InsufficientData("stream shorter than four cutoff periods");
    }
    const Biquad f = butter_highpass(cutoff, rate);

    // Odd-reflection padding at both ends keeps the forward-backward pass
    // from ringing into the data.
    const std::size_t pad = std::min<std::size_t>(
        n - 1, static_cast<std::size_t>(std::ceil(3.0 * rate / cutoff)));
    std::vector<double> buf;
    buf.reserve(n + 2 * pad);
    for (std::size_t i = 0; i < pad; ++i) {
        buf.push_back(2.0 * x[0] - x[pad - i]);
    }
    buf.insert(buf.end(), x.begin(), x.end());
    for (std::size_t i = 0; i < pad; ++i) {
        buf.push_back(2.0 * x[n - 1] - x[n - 2 - i]);
    }

    biquad_pass(f, buf);
    std::reverse(buf.begin(), buf.end());
    biquad_pass(f, buf);
    std::reverse(buf.begin(), buf.end());

    return {buf.begin() + static_cast<std::ptrdiff_t>(pad),
            buf.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

namespace {

double uniform_rate(const std::vector<double>& t) {
    if (t.size() < 2) throw InsufficientData("series too short");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (dt <= 0.0) throw ParameterError("timestamps must increase");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs(t[i] - t[i - 1] - dt) > 0.01 * dt) {
            throw ParameterError("series spacing not uniform within 1%");
        }
    }
    return 1.0 / dt;
}

std::vector<double> cumtrapz(const std::vector<double>& t,
                             const std::vector<double>& x) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 1; i < x.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (x[i] + x[i - 1]) * (t[i] - t[i - 1]);
    }
    return out;
}

}  // namespace

Vec3Series high_pass(const Vec3Series& s, double cutoff) {
    const double rate = uniform_rate(s.t);
    Vec3Series out;
    out.t = s.t;
    out.x = high_pass(s.x, cutoff, rate);
    out.y = high_pass(s.y, cutoff, rate);
    out.z = high_pass(s.z, cutoff, rate);
    return out;
}

DisplacementSeries integrate_displacement(const Vec3Series& a_lin,
                                          double cutoff) {
    const double rate = uniform_rate(a_lin.t);
    DisplacementSeries out;
    out.t = a_lin.t;
    out.ax = high_pass(a_lin.x, cutoff, rate);
    out.ay = high_pass(a_lin.y, cutoff, rate);
    out.az = high_pass(a_lin.z, cutoff, rate);

    const auto integrate = [&](const std::vector<double>& a,
                               std::vector<double>& v, std::vector<double>& b) {
        v = high_pass(cumtrapz(a_lin.t, a), cutoff, rate);
        b = high_pass(cumtrapz(a_lin.t, v), cutoff, rate);
    };
    integrate(a_lin.x, out.vx, out.bx);
    integrate(a_lin.y, out.vy, out.by);
    integrate(a_lin.z, out.vz, out.bz);
    return out;
}

MotionSummary motion_direction_amplitude(const DisplacementSeries& s,
                                         std::size_t begin, std::size_t end) {
    if (end > s.size() || begin >= end) throw OutOfRange("bad window bounds");
    const std::size_t n = end - begin;
    if (n < 8) throw ParameterError("motion window needs at least 8 samples");

    const double energy =
        kernels::reduce_sumsq({s.bx.data() + begin, n}) +
        kernels::reduce_sumsq({s.by.data() + begin, n}) +
        kernels::reduce_sumsq({s.bz.data() + begin, n});
    if (energy < 1e-8) {
        throw NoMotion("window displacement energy below 1e-8 m^2");
    }

    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    for (std::size_t i = begin; i < end; ++i) {
        const Eigen::Vector3d b = {s.bx[i], s.by[i], s.bz[i]};
        second += b * b.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(second);
    Eigen::Vector3d dir = eig.eigenvectors().col(2);  // largest eigenvalue

    // Sign convention: the first sample of peak displacement projects
    // positive on the axis.
    std::size_t peak = begin;
    double peak_norm = -1.0;
    for (std::size_t i = begin; i < end; ++i) {
        const double nb = std::hypot(s.bx[i], s.by[i], s.bz[i]);
        if (nb > peak_norm + 1e-15) {
            peak_norm = nb;
            peak = i;
        }
    }
    if (dir.dot(Eigen::Vector3d(s.bx[peak], s.by[peak], s.bz[peak])) < 0.0) {
        dir = -dir;
    }

    MotionSummary out{geo::UnitVector3::normalized(dir), {}, 0.0};
    out.p.reserve(n);
    for (std::size_t i = begin; i < end; ++i) {
        const Eigen::Vector3d b = {s.bx[i], s.by[i], s.bz[i]};
        const double nb = b.norm();
        if (nb < 1e-6) {
            out.p.push_back(0.0);
        } else {
            const double sign = b.dot(dir) >= 0.0 ? 1.0 : -1.0;
            out.p.push_back(-sign * nb);
        }
    }
    out.max_l1_acc = max_l1_acceleration({s.ax.data() + begin, n},
                                         {s.ay.data() + begin, n},
                                         {s.az.data() + begin, n});
    return out;
}

double max_l1_acceleration(std::span<const double> ax,
                           std::span<const double> ay,
                           std::span<const double> az) {
    return kernels::max_l1_3(ax, ay, az);
}

bool acceleration_gate(std::span<const double> ax, std::span<const double> ay,
                       std::span<const double> az, double threshold) {
    return max_l1_acceleration(ax, ay, az) >= threshold;
}

std::vector<std::pair<double, double>> allan_deviation(
    std::span<const double> y, double dt, std::span<const double> taus) {
    if (dt <= 0.0) throw ParameterError("sample interval must be positive");
    if (y.size() < 2) throw InsufficientData("stream too short");

    // Integrate the rate stream once; cluster averages become differences.
    std::vector<double> theta(y.size() + 1, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        theta[i + 1] = theta[i] + y[i] * dt;
    }

    std::vector<double> sorted(taus.begin(), taus.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<std::pair<double, double>> out;
    out.reserve(sorted.size());
    for (double tau : sorted) {
        if (tau <= 0.0) throw ParameterError("tau must be positive");
        const auto m = static_cast<std::size_t>(
            std::max<long long>(1, std::llround(tau / dt)));
        if (theta.size() < 2 * m + 9) {
            throw InsufficientData("fewer than 9 overlapping cluster pairs");
        }
        const std::size_t pairs = theta.size() - 2 * m;
        const double sumsq = kernels::allan_sumsq(theta, m);
        const double md = static_cast<double>(m) * dt;
        const double avar =
            sumsq / (2.0 * md * md * static_cast<double>(pairs));
        out.emplace_back(md, std::sqrt(avar));
    }
    return out;
}

}  // namespace spoofdet::imu
