#pragma once

#include <Eigen/Core>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spoofdet/errors.hpp"
#include "spoofdet/geo.hpp"
#include "spoofdet/imu.hpp"

namespace spoofdet::carrier {

// One tracked signal: constellation + PRN + band/attribute code, with the
// carrier wavelength in meters.
struct ChannelId {
    char system = 'G';
    int prn = 0;
    std::string signal;  // two-character band+attribute, e.g. "1C"
    double wavelength = 0.0;

    std::string sat() const;                   // "G05"
    std::string key() const;                   // "G05:1C"
    std::string phase_code() const { return "L" + signal; }
    std::string cn0_code() const { return "S" + signal; }

    friend bool operator==(const ChannelId& a, const ChannelId& b) {
        return a.system == b.system && a.prn == b.prn && a.signal == b.signal;
    }
    friend auto operator<=>(const ChannelId& a, const ChannelId& b) {
        if (auto c = a.system <=> b.system; c != 0) return c;
        if (auto c = a.prn <=> b.prn; c != 0) return c;
        return a.signal <=> b.signal;
    }
};

struct Observation {
    double phase = 0.0;  // cycles
    bool lock_lost = false;
    std::optional<double> cn0;  // dB-Hz
};

// All signals observed at one receiver epoch, sorted by channel.
struct ObservationEpoch {
    double t = 0.0;
    std::vector<std::pair<ChannelId, Observation>> obs;
};

// Channel-major view of an epoch stream. `epoch[i]` is the index of the
// source epoch for sample i, so gaps in tracking are visible.
struct ChannelSeries {
    ChannelId id;
    std::vector<std::size_t> epoch;
    std::vector<double> t;
    std::vector<double> phase;
    std::vector<std::uint8_t> lock_lost;
    std::vector<double> cn0;  // NaN where absent

    std::size_t size() const { return t.size(); }
};

std::vector<ChannelSeries> channelize(std::span<const ObservationEpoch> epochs);

// One slip-free span of phase ready for reduction: N+1 epochs, the antenna
// displacement interpolated to each, and the per-epoch noise level.
struct PhaseWindow {
    ChannelId channel;
    std::vector<double> t;
    std::vector<double> phase;
    std::vector<double> bx, by, bz;  // m, local frame
    double sigma = 0.0;              // cycles
    geo::UnitVector3 los;
};

// Flags phase discontinuities: an epoch whose lock indicator is set, or
// whose phase departs from a quadratic extrapolation of the recent past by
// more than `threshold` cycles after the predicted antenna-motion term
// (los . b / wavelength) is removed. The predictor restarts after each
// flagged epoch. phase/lock/b series must be aligned sample-for-sample.
std::vector<std::size_t> detect_cycle_slips(
    std::span<const double> phase, std::span<const std::uint8_t> lock_lost,
    std::span<const double> bx, std::span<const double> by,
    std::span<const double> bz, double wavelength,
    const geo::UnitVector3& los, double threshold = 0.5);

enum class WindowStatus { Ok, ChannelMissing, GapInWindow, CycleSlipInWindow };

struct WindowResult {
    WindowStatus status = WindowStatus::ChannelMissing;
    std::optional<PhaseWindow> window;
};

// Cuts the n_epochs-long span of `ch` ending at source epoch `end_epoch`,
// interpolates the displacement series onto its timestamps, screens it for
// cycle slips (with up to 4 samples of pre-history when the channel has
// them), and estimates sigma. Routine rejects come back as a status, not an
// exception. `nominal_dt` is the receiver epoch spacing; any in-window step
// above 1.5x of it is a gap.
WindowResult extract_window(const ChannelSeries& ch, std::size_t end_epoch,
                            std::size_t n_epochs, double nominal_dt,
                            const imu::DisplacementSeries& disp,
                            const geo::UnitVector3& los,
                            double slip_threshold = 0.5,
                            double sigma_floor = 1e-3);

// Robust per-epoch phase noise: median absolute deviation of the residuals
// of a least-squares fit of clock quadratic + projected motion, scaled to
// one sigma, floored at `floor` cycles.
double estimate_sigma(std::span<const double> phase,
                      std::span<const double> bx, std::span<const double> by,
                      std::span<const double> bz, double wavelength,
                      double floor = 1e-3);

// Whitened regression for one window: columns [1, i, i^2/2, bx/L, by/L,
// bz/L] scaled by 1/sigma, rhs the phase scaled the same way. The phase is
// first reduced by the line through its endpoints — that lies in the span
// of the polynomial columns, so the reduced system is unchanged while the
// numbers stay small.
struct DesignSystem {
    Eigen::MatrixXd design;  // (N+1) x 6
    Eigen::VectorXd rhs;     // N+1
};

DesignSystem build_design_matrix(const PhaseWindow& w);

}  // namespace spoofdet::carrier
