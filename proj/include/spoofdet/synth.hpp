#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "spoofdet/carrier.hpp"
#include "spoofdet/errors.hpp"
#include "spoofdet/geo.hpp"
#include "spoofdet/imu.hpp"

namespace spoofdet::synth {

// Consumer-to-tactical sensor grades; bias magnitudes and white-noise
// densities in datasheet units.
struct ImuNoisePreset {
    std::string name;
    double accel_bias_mg;           // mg, per-axis bound
    double accel_noise_ug_sqrthz;   // ug/sqrt(Hz)
    double gyro_bias_deg_h;         // deg/h, per-axis bound
    double gyro_noise_mdeg_s_sqrthz;  // mdeg/s/sqrt(Hz)
    double mag_noise_mgauss;        // mG; meaningful only when has_mag
    bool has_mag;
};

const ImuNoisePreset& imu_noise_preset(const std::string& name);
std::vector<std::string> imu_preset_names();

struct MotionComponent {
    Eigen::Vector3d axis;  // unit, local ENU
    double amplitude;      // m
    double freq;           // Hz
    double phase;          // rad
};

struct SatelliteDef {
    carrier::ChannelId channel;
    geo::EcefPosition pos0;
    Eigen::Vector3d vel;  // m/s, ECEF
};

struct SlipInjection {
    std::string channel_key;  // "G05:1C"
    std::size_t epoch;
    double cycles;
};

struct ScenarioConfig {
    double duration_s = 300.0;
    double gnss_rate_hz = 20.0;
    double imu_rate_hz = 100.0;
    geo::EcefPosition receiver{};
    std::vector<SatelliteDef> satellites;
    std::vector<MotionComponent> motion;
    std::array<double, 3> clock_drift{0.0, 0.0, 0.0};  // cycles, /s, /s^2
    double phase_noise_sigma = 0.01;  // cycles
    std::string imu_preset = "LSM6DSV";
    std::optional<geo::EcefPosition> spoofer;
    std::optional<std::pair<double, double>> attack_window;  // [t0, t1)
    std::vector<SlipInjection> slips;

    void validate() const;  // throws ConfigError
};

// Flat key=value scenario text. Keys: duration_s, gnss_rate_hz,
// imu_rate_hz, receiver=x,y,z, sat.N=id,sig,lambda,x,y,z,vx,vy,vz,
// motion.N=ux,uy,uz,amp,freq,phase, clock_drift=c0,c1,c2,
// phase_noise_sigma, imu_preset, spoofer=x,y,z, attack=t0,t1,
// slip.N=channel,epoch,cycles. '#' starts a comment.
ScenarioConfig parse_scenario(const std::string& text);

struct GeneratedScenario {
    std::vector<carrier::ObservationEpoch> observations;
    std::vector<imu::ImuSample> imu;
    geo::SatPositionTable sat_table;
    std::vector<std::pair<double, bool>> truth;  // (t, spoofed)
    geo::EcefPosition receiver{};
};

// Deterministic end-to-end scenario: antenna sway as a sum of sinusoids,
// per-satellite carrier phase carrying either the per-satellite or (inside
// the attack window) the shared spoofer projection of that sway, and an
// inertial stream with the preset's bias and noise. Equal (config, seed)
// pairs produce identical streams.
GeneratedScenario generate_scenario(const ScenarioConfig& cfg,
                                    std::uint64_t seed);

// Antenna displacement the generator used, for oracles: sum of the
// configured sinusoids at time t, local frame.
Eigen::Vector3d scenario_displacement(const ScenarioConfig& cfg, double t);

void write_rinex_obs(std::ostream& os,
                     const std::vector<carrier::ObservationEpoch>& epochs,
                     const geo::EcefPosition& receiver);
void write_imu_csv(std::ostream& os, const std::vector<imu::ImuSample>& samples);
void write_sat_csv(std::ostream& os, const geo::SatPositionTable& table);
void write_truth_csv(std::ostream& os,
                     const std::vector<std::pair<double, bool>>& truth);

}  // namespace spoofdet::synth
