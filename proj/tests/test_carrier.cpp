#include <doctest.h>

#include <spoofdet/carrier.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace spoofdet;
using carrier::ChannelId;
using carrier::ChannelSeries;
using carrier::Observation;
using carrier::ObservationEpoch;
using carrier::WindowStatus;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kL1 = 299792458.0 / 1575.42e6;  // m

ChannelId l1_channel(char sys, int prn) {
  return ChannelId{sys, prn, "1C", kL1};
}

// Antenna displacement along `axis`: b(t) = amp * sin(2 pi f t) * axis.
imu::DisplacementSeries make_disp(const Eigen::Vector3d& axis, double amp,
                                  double freq, double t0, double t1,
                                  double rate = 100.0) {
  imu::DisplacementSeries d;
  for (double t = t0; t <= t1 + 1e-9; t += 1.0 / rate) {
    const double b = amp * std::sin(2.0 * kPi * freq * t);
    d.t.push_back(t);
    d.bx.push_back(b * axis.x());
    d.by.push_back(b * axis.y());
    d.bz.push_back(b * axis.z());
    d.vx.push_back(0.0);
    d.vy.push_back(0.0);
    d.vz.push_back(0.0);
    d.ax.push_back(0.0);
    d.ay.push_back(0.0);
    d.az.push_back(0.0);
  }
  return d;
}

}  // namespace

TEST_SUITE("carrier") {

TEST_CASE("channel id formatting and ordering") {
  auto id = l1_channel('G', 5);
  CHECK(id.sat() == "G05");
  CHECK(id.key() == "G05:1C");
  CHECK(id.phase_code() == "L1C");
  CHECK(id.cn0_code() == "S1C");
  auto e = ChannelId{'E', 11, "5Q", 299792458.0 / 1176.45e6};
  CHECK(e.sat() == "E11");
  CHECK(e < id);  // 'E' < 'G'
  CHECK(l1_channel('G', 5) == id);
  CHECK(l1_channel('G', 6) != id);
}

TEST_CASE("channelize splits epochs into per-channel streams") {
  auto g5 = l1_channel('G', 5);
  auto e11 = ChannelId{'E', 11, "1C", kL1};
  std::vector<ObservationEpoch> epochs(3);
  for (int k = 0; k < 3; ++k) {
    epochs[k].t = 0.5 * k;
    epochs[k].obs.push_back({g5, Observation{100.0 + k, false, 45.0}});
  }
  // E11 misses the middle epoch and reacquires with the lock flag set.
  epochs[0].obs.push_back({e11, Observation{200.0, false, std::nullopt}});
  epochs[2].obs.push_back({e11, Observation{202.0, true, 38.0}});

  auto series = carrier::channelize(epochs);
  REQUIRE(series.size() == 2);
  // Sorted by channel: E before G.
  CHECK(series[0].id == e11);
  CHECK(series[1].id == g5);

  const auto& e = series[0];
  REQUIRE(e.size() == 2);
  CHECK(e.epoch == std::vector<std::size_t>{0, 2});
  CHECK(e.t[1] == 1.0);
  CHECK(e.phase[1] == 202.0);
  CHECK(e.lock_lost[0] == 0);
  CHECK(e.lock_lost[1] == 1);
  CHECK(std::isnan(e.cn0[0]));
  CHECK(e.cn0[1] == 38.0);

  const auto& g = series[1];
  REQUIRE(g.size() == 3);
  CHECK(g.epoch == std::vector<std::size_t>{0, 1, 2});
  CHECK(g.cn0[2] == 45.0);
}

TEST_CASE("channelize requires strictly increasing epoch times") {
  std::vector<ObservationEpoch> epochs(2);
  epochs[0].t = 1.0;
  epochs[1].t = 1.0;
  CHECK_THROWS_AS(carrier::channelize(epochs), ParameterError);
}

TEST_CASE("slip detector is quiet on clock quadratic plus tracked motion") {
  const auto los = geo::UnitVector3::normalized({0.3, 0.5, 0.8});
  const std::size_t n = 100;
  std::vector<double> phase(n), bx(n), by(n), bz(n);
  std::vector<std::uint8_t> lock(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 0.5 * double(i);
    const double b = 0.04 * std::sin(2.0 * kPi * 1.3 * t);
    bx[i] = 0.6 * b;
    by[i] = 0.0;
    bz[i] = 0.8 * b;
    const double proj = los.ux() * bx[i] + los.uy() * by[i] + los.uz() * bz[i];
    // Large clock terms: the quadratic extrapolation absorbs them exactly.
    phase[i] = 1.0e4 + 37.0 * double(i) + 0.01 * double(i) * double(i) +
               proj / kL1;
  }
  CHECK(carrier::detect_cycle_slips(phase, lock, bx, by, bz, kL1, los).empty());

  SUBCASE("a one-cycle step flags exactly once and the predictor restarts") {
    for (std::size_t i = 50; i < n; ++i) phase[i] += 1.0;
    auto slips = carrier::detect_cycle_slips(phase, lock, bx, by, bz, kL1, los);
    CHECK(slips == std::vector<std::size_t>{50});
  }

  SUBCASE("a lock-loss flag is reported even with continuous phase") {
    lock[30] = 1;
    auto slips = carrier::detect_cycle_slips(phase, lock, bx, by, bz, kL1, los);
    CHECK(slips == std::vector<std::size_t>{30});
  }

  SUBCASE("motion the displacement series explains is not a slip") {
    // Antenna jerk: b steps by 2 wavelengths along the sight line, phase
    // follows. With the displacement known there is nothing to flag; with
    // it missing the same phase looks like a slip.
    std::vector<double> bx2 = bx, by2 = by, bz2 = bz, ph2 = phase;
    const double step_m = 2.0 * kL1;
    for (std::size_t i = 60; i < n; ++i) {
      bx2[i] += step_m * los.ux();
      by2[i] += step_m * los.uy();
      bz2[i] += step_m * los.uz();
      ph2[i] += step_m / kL1;  // los . db = step_m
    }
    CHECK(carrier::detect_cycle_slips(ph2, lock, bx2, by2, bz2, kL1, los).empty());
    CHECK(carrier::detect_cycle_slips(ph2, lock, bx, by, bz, kL1, los) ==
          std::vector<std::size_t>{60});
  }
}

TEST_CASE("slip detector validates its inputs") {
  std::vector<double> phase(10, 0.0), b(9, 0.0);
  std::vector<std::uint8_t> lock(10, 0);
  const auto los = geo::UnitVector3::normalized({1.0, 0.0, 0.0});
  CHECK_THROWS_AS(
      carrier::detect_cycle_slips(phase, lock, b, b, b, kL1, los),
      AlignmentError);
  std::vector<double> b10(10, 0.0);
  CHECK_THROWS_AS(
      carrier::detect_cycle_slips(phase, lock, b10, b10, b10, 0.0, los),
      ParameterError);
  CHECK_THROWS_AS(
      carrier::detect_cycle_slips(phase, lock, b10, b10, b10, kL1, los, 0.0),
      ParameterError);
}

TEST_CASE("window extraction statuses") {
  // 44 receiver epochs at 0.5 s; the channel tracks all of them except
  // source epoch 25, and takes a one-cycle slip at epoch 30.
  const auto id = l1_channel('G', 7);
  const auto los = geo::UnitVector3::normalized({0.2, -0.4, 0.89});
  const Eigen::Vector3d axis = Eigen::Vector3d(1.0, 0.4, 0.2).normalized();
  auto disp = make_disp(axis, 0.03, 1.5, -1.0, 25.0);

  std::vector<ObservationEpoch> epochs;
  for (std::size_t k = 0; k < 44; ++k) {
    const double t = 0.5 * double(k);
    ObservationEpoch ep;
    ep.t = t;
    if (k != 25) {
      const Eigen::Vector3d b = disp.displacement_at(t);
      double ph = 2.0e3 + 11.0 * t + 0.02 * t * t +
                  (los.ux() * b.x() + los.uy() * b.y() + los.uz() * b.z()) / kL1;
      if (k >= 30) ph += 1.0;  // unflagged slip
      ep.obs.push_back({id, Observation{ph, false, 44.0}});
    }
    epochs.push_back(ep);
  }
  auto series = carrier::channelize(epochs);
  REQUIRE(series.size() == 1);
  const ChannelSeries& ch = series[0];

  SUBCASE("a clean stretch comes back complete") {
    // Epochs 36..43: slip 5+ samples in the past, fully absorbed.
    auto r = carrier::extract_window(ch, 43, 8, 0.5, disp, los);
    REQUIRE(r.status == WindowStatus::Ok);
    REQUIRE(r.window.has_value());
    const auto& w = *r.window;
    CHECK(w.t.size() == 8);
    CHECK(w.phase.size() == 8);
    CHECK(w.bx.size() == 8);
    CHECK(w.t.front() == doctest::Approx(18.0));
    CHECK(w.t.back() == doctest::Approx(21.5));
    CHECK(w.sigma == 1e-3);  // zero-noise phase: the floor binds
    CHECK(w.los.vec().isApprox(los.vec()));
    const Eigen::Vector3d b0 = disp.displacement_at(w.t.front());
    CHECK(w.bx.front() == doctest::Approx(b0.x()).epsilon(1e-12));
  }

  SUBCASE("asking for an epoch the channel missed") {
    auto r = carrier::extract_window(ch, 25, 8, 0.5, disp, los);
    CHECK(r.status == WindowStatus::ChannelMissing);
  }

  SUBCASE("asking for more history than the channel has") {
    auto r = carrier::extract_window(ch, 10, 12, 0.5, disp, los);
    CHECK(r.status == WindowStatus::ChannelMissing);
  }

  SUBCASE("a dropped epoch inside the window is a gap") {
    auto r = carrier::extract_window(ch, 30, 10, 0.5, disp, los);
    CHECK(r.status == WindowStatus::GapInWindow);
  }

  SUBCASE("the slip epoch inside the window is rejected") {
    auto r = carrier::extract_window(ch, 39, 12, 0.5, disp, los);
    CHECK(r.status == WindowStatus::CycleSlipInWindow);
  }

  SUBCASE("window parameters are validated") {
    CHECK_THROWS_AS(carrier::extract_window(ch, 43, 7, 0.5, disp, los),
                    ParameterError);
    CHECK_THROWS_AS(carrier::extract_window(ch, 43, 8, 0.0, disp, los),
                    ParameterError);
  }
}

TEST_CASE("sigma estimate is calibrated on gaussian phase noise") {
  const auto los = geo::UnitVector3::normalized({0.1, 0.7, 0.7});
  const std::size_t n = 101;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 0.01);

  std::vector<double> bx(n), by(n), bz(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 0.5 * double(i);
    bx[i] = 0.05 * std::sin(2.0 * kPi * 1.1 * t);
    by[i] = 0.03 * std::sin(2.0 * kPi * 1.7 * t + 0.4);
    bz[i] = 0.02 * std::sin(2.0 * kPi * 0.9 * t + 1.1);
  }

  double ratio_sum = 0.0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> phase(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double proj = los.ux() * bx[i] + los.uy() * by[i] + los.uz() * bz[i];
      phase[i] = 5.0e3 + 3.0 * double(i) + 2e-4 * double(i) * double(i) +
                 proj / kL1 + g(rng);
    }
    ratio_sum += carrier::estimate_sigma(phase, bx, by, bz, kL1, 1e-4) / 0.01;
  }
  const double mean_ratio = ratio_sum / trials;
  CHECK(mean_ratio > 0.85);
  CHECK(mean_ratio < 1.1);
}

TEST_CASE("sigma floor binds on noiseless phase") {
  const std::size_t n = 21;
  std::vector<double> phase(n), b0(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    phase[i] = 1.0 + 0.5 * double(i) + 0.01 * double(i) * double(i);
  CHECK(carrier::estimate_sigma(phase, b0, b0, b0, kL1) == 1e-3);
  CHECK(carrier::estimate_sigma(phase, b0, b0, b0, kL1, 0.05) == 0.05);
}

TEST_CASE("sigma estimate shrugs off a single wild residual") {
  const std::size_t n = 101;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 0.01);
  std::vector<double> phase(n), b0(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    phase[i] = 2.0 * double(i) + g(rng);
  phase[n / 2] += 10.0;  // ten-cycle outlier
  const double s = carrier::estimate_sigma(phase, b0, b0, b0, kL1, 1e-4);
  // An rms-based estimate would sit near 10/sqrt(n) ~ 1 cycle.
  CHECK(s < 0.3);
}

TEST_CASE("design matrix carries the whitened model columns") {
  const auto los = geo::UnitVector3::normalized({0.5, -0.5, 0.7071067811865476});
  carrier::PhaseWindow w;
  w.channel = l1_channel('G', 3);
  w.los = los;
  w.sigma = 0.02;
  const std::size_t n = 21;
  const double beta2 = 4.0e-3;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 0.5 * double(i);
    w.t.push_back(t);
    w.bx.push_back(0.05 * std::sin(2.0 * kPi * 1.1 * t));
    w.by.push_back(0.03 * std::sin(2.0 * kPi * 1.7 * t + 0.4));
    w.bz.push_back(0.02 * std::sin(2.0 * kPi * 0.9 * t + 1.1));
    const double proj = los.ux() * w.bx[i] + los.uy() * w.by[i] + los.uz() * w.bz[i];
    w.phase.push_back(7.0 + 0.3 * double(i) +
                      beta2 * 0.5 * double(i) * double(i) + proj / kL1);
  }

  auto sys = carrier::build_design_matrix(w);
  REQUIRE(sys.design.rows() == Eigen::Index(n));
  REQUIRE(sys.design.cols() == 6);
  REQUIRE(sys.rhs.size() == Eigen::Index(n));

  const double inv_sigma = 1.0 / w.sigma;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(sys.design(i, 0) == doctest::Approx(inv_sigma));
    CHECK(sys.design(i, 1) == doctest::Approx(double(i) * inv_sigma));
    CHECK(sys.design(i, 2) ==
          doctest::Approx(0.5 * double(i) * double(i) * inv_sigma));
    CHECK(sys.design(i, 3) == doctest::Approx(w.bx[i] / kL1 * inv_sigma));
    CHECK(sys.design(i, 4) == doctest::Approx(w.by[i] / kL1 * inv_sigma));
    CHECK(sys.design(i, 5) == doctest::Approx(w.bz[i] / kL1 * inv_sigma));
  }
  // The pre-whitening detrend removes the least-squares quadratic, so the
  // right-hand side is orthogonal to the clock basis.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s0 += sys.rhs(Eigen::Index(i));
    s1 += sys.rhs(Eigen::Index(i)) * double(i);
    s2 += sys.rhs(Eigen::Index(i)) * double(i) * double(i);
  }
  CHECK(s0 == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
  CHECK(s1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
  CHECK(s2 == doctest::Approx(0.0).scale(1.0).epsilon(1e-2));

  // Dense least squares on the system recovers the motion direction; the
  // detrend only moves the clock coefficients, never these.
  Eigen::VectorXd x = sys.design.colPivHouseholderQr().solve(sys.rhs);
  CHECK(x(3) == doctest::Approx(los.ux()).epsilon(1e-8));
  CHECK(x(4) == doctest::Approx(los.uy()).epsilon(1e-8));
  CHECK(x(5) == doctest::Approx(los.uz()).epsilon(1e-8));
}

}  // TEST_SUITE
