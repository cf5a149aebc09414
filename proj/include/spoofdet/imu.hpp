#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spoofdet/errors.hpp"
#include "spoofdet/geo.hpp"

namespace spoofdet::imu {

inline constexpr double kGravity = 9.80665;  // m/s^2

// One inertial sample in the body frame.
struct ImuSample {
    double t = 0.0;                            // s
    Eigen::Vector3d specific_force;            // m/s^2
    Eigen::Vector3d angular_rate;              // rad/s
    std::optional<Eigen::Vector3d> magnetic;   // microtesla
};

// Body -> local-level (ENU) orientation at one instant.
struct Attitude {
    double t = 0.0;
    Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
    bool converging = false;  // inside the initial settling window
};

// Uniform 3-axis series, struct-of-arrays so the kernels can stream it.
struct Vec3Series {
    std::vector<double> t;
    std::vector<double> x, y, z;

    std::size_t size() const { return t.size(); }
    Eigen::Vector3d at(std::size_t i) const { return {x[i], y[i], z[i]}; }
};

// High-pass displacement/velocity/acceleration of the antenna in the local
// frame. All three series share the timestamps and the high-pass cutoff, so
// any bias or slow drift present in the raw integration is absent here.
struct DisplacementSeries {
    std::vector<double> t;
    std::vector<double> bx, by, bz;  // m
    std::vector<double> vx, vy, vz;  // m/s
    std::vector<double> ax, ay, az;  // m/s^2

    std::size_t size() const { return t.size(); }
    Eigen::Vector3d displacement_at(double time) const;  // linear interp
};

struct MotionSummary {
    geo::UnitVector3 r_a;    // dominant motion direction
    std::vector<double> p;   // signed amplitude per sample, m
    double max_l1_acc = 0.0;
};

// Complementary gradient-descent orientation filter: gyro propagation
// corrected toward the accelerometer gravity direction, plus the
// magnetometer heading when a sample carries one. `gain` is the descent
// step weight; samples inside the first `init_window` seconds are marked
// converging. Requires a stream spanning at least init_window.
std::vector<Attitude> estimate_attitude(std::span<const ImuSample> samples,
                                        double gain = 0.1,
                                        double init_window = 5.0);

// a_lin[k] = R(q_k) * f_k - (0,0,g). Attitudes must carry the same
// timestamps as the samples.
Vec3Series linear_acceleration(std::span<const ImuSample> samples,
                               std::span<const Attitude> attitudes);

// Second-order Butterworth high-pass applied forward-backward (zero phase).
// cutoff must lie in (0, rate/4) and the stream must span >= 4/cutoff s.
std::vector<double> high_pass(std::span<const double> x, double cutoff,
                              double rate);
Vec3Series high_pass(const Vec3Series& s, double cutoff);

// Trapezoidal a->v and v->b, each followed by the high-pass. The stored
// acceleration is the high-passed input so all three series live in the
// same band.
DisplacementSeries integrate_displacement(const Vec3Series& a_lin,
                                          double cutoff);

// Dominant direction (second-moment eigenvector, sign fixed so the first
// extremal displacement projects positive) and the signed per-sample
// amplitude p[k] = -sign(b.r_a) * |b|, zero below 1e-6 m.
// Window is [begin, end) into the series; needs >= 8 samples.
MotionSummary motion_direction_amplitude(const DisplacementSeries& s,
                                         std::size_t begin, std::size_t end);

// max over the window of |ax|+|ay|+|az|
double max_l1_acceleration(std::span<const double> ax,
                           std::span<const double> ay,
                           std::span<const double> az);

// true iff the window's peak L1 acceleration reaches the threshold
bool acceleration_gate(std::span<const double> ax, std::span<const double> ay,
                       std::span<const double> az, double threshold);

// Overlapping Allan deviation of a uniform scalar stream sampled every dt
// seconds. Each requested tau is realized as the nearest integer multiple
// of dt; output is sorted by realized tau. A tau with fewer than 9
// overlapping cluster pairs raises InsufficientData.
std::vector<std::pair<double, double>> allan_deviation(
    std::span<const double> y, double dt, std::span<const double> taus);

}  // namespace spoofdet::imu
