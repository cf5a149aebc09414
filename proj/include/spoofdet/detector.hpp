#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spoofdet/carrier.hpp"
#include "spoofdet/errors.hpp"
#include "spoofdet/geo.hpp"
#include "spoofdet/imu.hpp"

namespace spoofdet::detect {

// Per-channel remainder of the whitened regression after the clock
// polynomial is projected out: an upper-triangular 3x3 acting on the
// motion-projection unknown, the matching reduced observation, and the
// energy left in the trailing rows (pure noise under either hypothesis).
struct QrArtifacts {
    carrier::ChannelId channel;
    Eigen::Matrix3d r3 = Eigen::Matrix3d::Zero();
    Eigen::Vector3d z3 = Eigen::Vector3d::Zero();
    double residual_tail_energy = 0.0;
    geo::UnitVector3 los;
    bool motion_rank_ok = true;
};

QrArtifacts qr_reduce(const carrier::DesignSystem& sys,
                      const carrier::ChannelId& channel,
                      const geo::UnitVector3& los);

struct AttitudeFit {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    double j = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Minimizes sum_j |R3_j A r_j - z3_j|^2 / 2 over rotations A by
// Gauss-Newton on the rotation manifold, warm-started from an orthogonal
// Procrustes alignment when the channel triangles are invertible and from
// a fixed grid of coarse orientations otherwise. Throws NotIdentifiable
// with fewer than two non-collinear lines of sight.
AttitudeFit optimize_attitude(std::span<const QrArtifacts> artifacts,
                              double tol = 1e-10, int max_iter = 1000);

struct SpooferFit {
    geo::UnitVector3 direction;
    double j = 0.0;
};

// Minimizes sum_j |R3_j r - z3_j|^2 / 2 over unit vectors r: an exact
// trust-region subproblem solved through the secular equation on the
// multiplier, including the degenerate ("hard") case.
SpooferFit optimize_spoofer_los(std::span<const QrArtifacts> artifacts);

enum class Classification { Spoofing, NonSpoofing, Undefined };

struct Decision {
    double gamma = 0.0;
    Classification classification = Classification::Undefined;
};

// gamma = j_sp - j_nonsp; positive favors independent geometry (benign),
// negative favors a single shared direction (spoofed).
Decision decide(double j_sp, double j_nonsp);

struct Verdict {
    double t = 0.0;
    Classification classification = Classification::Undefined;
    bool have_test = false;  // true when both objectives were evaluated
    double gamma = 0.0;
    double j_sp = 0.0;
    double j_nonsp = 0.0;
    int n_channels = 0;
    double max_l1_acc = 0.0;
    bool motion_rank_ok = false;
};

struct RunSummary {
    long events = 0;
    long undefined = 0;
    long spoofing = 0;
    long non_spoofing = 0;
};

struct RunConfig {
    int window_len = 20;     // N; a window spans N+1 epochs
    int stride = 10;         // epochs between verdicts
    double acc_threshold = 0.5;   // m/s^2, peak L1 over the window
    double hp_cutoff = 0.25;      // Hz
    int min_channels = 4;
    double elevation_mask_deg = 10.0;
    double sigma_floor = 1e-3;    // cycles
    double imu_time_offset = 0.0; // s, added to inertial timestamps
    int burn_in = 0;              // epochs skipped at the start
    double slip_threshold = 0.5;  // cycles
    double attitude_gain = 0.1;
    double attitude_init_window = 5.0;  // s
    int threads = 1;
    std::optional<geo::EcefPosition> receiver;

    void validate() const;  // throws ConfigError
};

// Flat key=value config text; keys match the field names, receiver given
// as "x,y,z". Unknown keys raise ConfigError.
RunConfig parse_run_config(const std::string& text);

struct RunResult {
    std::vector<Verdict> verdicts;
    RunSummary summary;
};

// Full pipeline over time-aligned streams: attitude, displacement, then
// one verdict per stride. Each window gates on measured acceleration,
// rejects low or slipped channels, reduces the survivors, runs both
// optimizers, and classifies. Identical inputs produce identical verdicts
// regardless of `threads`.
RunResult run_detection(std::span<const carrier::ObservationEpoch> obs,
                        std::span<const imu::ImuSample> imu_samples,
                        const geo::SatPositionTable& sats,
                        const RunConfig& cfg);

// One verdict as a single JSON line (no trailing newline). Numbers use
// shortest round-trip formatting, so equal inputs serialize to equal bytes.
std::string verdict_jsonl(const Verdict& v);

std::string summary_text(const RunSummary& s);

}  // namespace spoofdet::detect
