#include "spoofdet/carrier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace spoofdet::carrier {

std::string ChannelId::sat() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%c%02d", system, prn);
    return buf;
}

std::string ChannelId::key() const { return sat() + ":" + signal; }

std::vector<ChannelSeries> channelize(std::span<const ObservationEpoch> epochs) {
    std::map<ChannelId, ChannelSeries> by_id;
    double last_t = -std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < epochs.size(); ++e) {
        if (epochs[e].t <= last_t) {
            throw ParameterError("observation epochs must be strictly increasing");
        }
        last_t = epochs[e].t;
        for (const auto& [id, ob] : epochs[e].obs) {
            ChannelSeries& s = by_id[id];
            if (s.t.empty()) s.id = id;
            s.epoch.push_back(e);
            s.t.push_back(epochs[e].t);
            s.phase.push_back(ob.phase);
            s.lock_lost.push_back(ob.lock_lost ? 1 : 0);
            s.cn0.push_back(ob.cn0.value_or(
                std::numeric_limits<double>::quiet_NaN()));
        }
    }
    std::vector<ChannelSeries> out;
    out.reserve(by_id.size());
    for (auto& [id, s] : by_id) out.push_back(std::move(s));
    return out;
}

std::vector<std::size_t> detect_cycle_slips(
    std::span<const double> phase, std::span<const std::uint8_t> lock_lost,
    std::span<const double> bx, std::span<const double> by,
    std::span<const double> bz, double wavelength,
    const geo::UnitVector3& los, double threshold) {
    const std::size_t n = phase.size();
    if (lock_lost.size() != n || bx.size() != n || by.size() != n ||
        bz.size() != n) {
        throw AlignmentError("cycle-slip inputs differ in length");
    }
    if (wavelength <= 0.0) throw ParameterError("wavelength must be positive");
    if (threshold <= 0.0) throw ParameterError("slip threshold must be positive");

    // Motion-corrected phase: with the projected antenna term removed, a
    // clean channel is just clock polynomial + noise.
    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double proj = los.ux() * bx[i] + los.uy() * by[i] + los.uz() * bz[i];
        psi[i] = phase[i] - proj / wavelength;
    }

    // One-step-ahead weights of the least-squares quadratic through the 4
    // previous samples, solved numerically rather than hard-coded.
    Eigen::Matrix<double, 4, 3> X;
    for (int r = 0; r < 4; ++r) {
        const double x = static_cast<double>(r - 4);  // -4..-1
        X(r, 0) = 1.0;
        X(r, 1) = x;
        X(r, 2) = x * x;
    }
    const Eigen::Matrix3d xtx = X.transpose() * X;
    const Eigen::Vector4d w = X * xtx.ldlt().solve(Eigen::Vector3d(1.0, 0.0, 0.0));

    std::vector<std::size_t> slips;
    std::size_t fresh = 0;  // first sample after the last discontinuity
    for (std::size_t i = 0; i < n; ++i) {
        bool slip = lock_lost[i] != 0;
        if (!slip && i >= fresh + 4) {
            const double pred = w[0] * psi[i - 4] + w[1] * psi[i - 3] +
                                w[2] * psi[i - 2] + w[3] * psi[i - 1];
            slip = std::abs(psi[i] - pred) > threshold;
        }
        if (slip) {
            slips.push_back(i);
            fresh = i;
        }
    }
    return slips;
}

WindowResult extract_window(const ChannelSeries& ch, std::size_t end_epoch,
                            std::size_t n_epochs, double nominal_dt,
                            const imu::DisplacementSeries& disp,
                            const geo::UnitVector3& los,
                            double slip_threshold, double sigma_floor) {
    if (n_epochs < 8) throw ParameterError("window needs at least 8 epochs");
    if (nominal_dt <= 0.0) throw ParameterError("epoch spacing must be positive");

    const auto it =
        std::lower_bound(ch.epoch.begin(), ch.epoch.end(), end_epoch);
    if (it == ch.epoch.end() || *it != end_epoch) {
        return {WindowStatus::ChannelMissing, std::nullopt};
    }
    const std::size_t pos = static_cast<std::size_t>(it - ch.epoch.begin());
    if (pos + 1 < n_epochs) return {WindowStatus::ChannelMissing, std::nullopt};
    const std::size_t first = pos + 1 - n_epochs;

    for (std::size_t i = first + 1; i <= pos; ++i) {
        if (ch.t[i] - ch.t[i - 1] > 1.5 * nominal_dt) {
            return {WindowStatus::GapInWindow, std::nullopt};
        }
    }

    // Pre-history for the slip screen: up to 4 contiguous samples before
    // the window.
    std::size_t lead = 0;
    while (lead < 4 && first - lead > 0 &&
           ch.t[first - lead] - ch.t[first - lead - 1] <= 1.5 * nominal_dt) {
        ++lead;
    }
    const std::size_t lo = first - lead;
    const std::size_t total = pos - lo + 1;

    std::vector<double> bx(total), by(total), bz(total);
    for (std::size_t i = 0; i < total; ++i) {
        const Eigen::Vector3d b = disp.displacement_at(ch.t[lo + i]);
        bx[i] = b.x();
        by[i] = b.y();
        bz[i] = b.z();
    }

    const auto slips = detect_cycle_slips(
        {ch.phase.data() + lo, total}, {ch.lock_lost.data() + lo, total}, bx,
        by, bz, ch.id.wavelength, los, slip_threshold);
    for (std::size_t s : slips) {
        if (s >= lead) return {WindowStatus::CycleSlipInWindow, std::nullopt};
    }

    PhaseWindow w;
    w.channel = ch.id;
    w.t.assign(ch.t.begin() + static_cast<std::ptrdiff_t>(first),
               ch.t.begin() + static_cast<std::ptrdiff_t>(pos + 1));
    w.phase.assign(ch.phase.begin() + static_cast<std::ptrdiff_t>(first),
                   ch.phase.begin() + static_cast<std::ptrdiff_t>(pos + 1));
    w.bx.assign(bx.begin() + static_cast<std::ptrdiff_t>(lead), bx.end());
    w.by.assign(by.begin() + static_cast<std::ptrdiff_t>(lead), by.end());
    w.bz.assign(bz.begin() + static_cast<std::ptrdiff_t>(lead), bz.end());
    w.sigma = estimate_sigma(w.phase, w.bx, w.by, w.bz, ch.id.wavelength,
                             sigma_floor);
    w.los = los;
    return {WindowStatus::Ok, std::move(w)};
}

namespace {

double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

// Remove the least-squares quadratic in the epoch index. Any quadratic
// lies in the span of the clock columns, so downstream fits and residuals
// are mathematically unchanged — but taking it out up front keeps the
// ~1e8-cycle range offset and any steep clock curvature away from the
// whitened factorization, where their magnitude would otherwise eat the
// mantissa. Two stages: the line through the endpoints absorbs the bulk
// offset, then a well-scaled quadratic fit handles the rest.
std::vector<double> detrend_quadratic(std::span<const double> phase) {
    const std::size_t n = phase.size();
    std::vector<double> d(n);
    const double p0 = phase.front();
    const double slope =
        (phase.back() - p0) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = phase[i] - (p0 + slope * static_cast<double>(i));
    }

    const double mid = 0.5 * static_cast<double>(n - 1);
    const double half = std::max(1.0, mid);
    Eigen::MatrixXd basis(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) - mid) / half;
        basis(static_cast<Eigen::Index>(i), 0) = 1.0;
        basis(static_cast<Eigen::Index>(i), 1) = x;
        basis(static_cast<Eigen::Index>(i), 2) = x * x;
    }
    const Eigen::Vector3d c =
        basis.colPivHouseholderQr().solve(Eigen::Map<const Eigen::VectorXd>(
            d.data(), static_cast<Eigen::Index>(n)));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = (static_cast<double>(i) - mid) / half;
        d[i] -= c[0] + c[1] * x + c[2] * x * x;
    }
    return d;
}

Eigen::MatrixXd motion_design(std::span<const double> bx,
                              std::span<const double> by,
                              std::span<const double> bz, double wavelength,
                              std::size_t n) {
    Eigen::MatrixXd a(n, 6);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        a(static_cast<Eigen::Index>(i), 0) = 1.0;
        a(static_cast<Eigen::Index>(i), 1) = x;
        a(static_cast<Eigen::Index>(i), 2) = 0.5 * x * x;
        a(static_cast<Eigen::Index>(i), 3) = bx[i] / wavelength;
        a(static_cast<Eigen::Index>(i), 4) = by[i] / wavelength;
        a(static_cast<Eigen::Index>(i), 5) = bz[i] / wavelength;
    }
    return a;
}

}  // namespace

double estimate_sigma(std::span<const double> phase,
                      std::span<const double> bx, std::span<const double> by,
                      std::span<const double> bz, double wavelength,
                      double floor) {
    const std::size_t n = phase.size();
    if (n < 8) throw ParameterError("sigma estimate needs at least 8 epochs");
    if (bx.size() != n || by.size() != n || bz.size() != n) {
        throw AlignmentError("phase and displacement lengths disagree");
    }
    if (wavelength <= 0.0) throw ParameterError("wavelength must be positive");

    const std::vector<double> d = detrend_quadratic(phase);
    const Eigen::MatrixXd a = motion_design(bx, by, bz, wavelength, n);
    const Eigen::VectorXd rhs =
        Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd fit = a.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd res = rhs - a * fit;

    std::vector<double> r(res.data(), res.data() + res.size());
    const double med = median_inplace(r);
    for (double& v : r) v = std::abs(v - med);
    const double mad = median_inplace(r);
    return std::max(1.4826 * mad, floor);
}

DesignSystem build_design_matrix(const PhaseWindow& w) {
    const std::size_t n = w.phase.size();
    if (n < 8) throw ParameterError("window needs at least 8 epochs");
    if (w.sigma <= 0.0) throw ParameterError("window sigma must be positive");

    const std::vector<double> d = detrend_quadratic(w.phase);
    DesignSystem sys;
    sys.design = motion_design(w.bx, w.by, w.bz, w.channel.wavelength, n) / w.sigma;
    sys.rhs.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        sys.rhs[static_cast<Eigen::Index>(i)] = d[i] / w.sigma;
    }
    return sys;
}

}  // namespace spoofdet::carrier
