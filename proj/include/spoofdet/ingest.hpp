#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "spoofdet/carrier.hpp"
#include "spoofdet/errors.hpp"
#include "spoofdet/geo.hpp"
#include "spoofdet/imu.hpp"

namespace spoofdet::ingest {

struct RinexObsFile {
    std::vector<carrier::ObservationEpoch> epochs;
    std::optional<geo::EcefPosition> approx_position;
    long skipped_fields = 0;  // observation codes we do not model
};

// Observation-file subset of RINEX 3.0x: version/type, APPROX POSITION
// XYZ, SYS / # / OBS TYPES (with continuations), END OF HEADER, '>' epoch
// records with per-satellite observation lines. Phase codes (L..) become
// carrier observations with the lock-loss bit taken from the LLI flag;
// matching S.. codes attach a carrier-to-noise density. Anything else is
// skipped and counted. Structural problems raise the ParseError family
// with the offending line number; arbitrary malformed input must never
// crash the parser.
RinexObsFile parse_rinex_obs(std::istream& in);

// Header "t_s,ax,ay,az,gx,gy,gz,mx,my,mz"; the three magnetometer fields
// may all be empty on a row (no field measurement).
std::vector<imu::ImuSample> parse_imu_csv(std::istream& in);

// Header "t_s,sat,x_m,y_m,z_m". Rows must be time-sorted per satellite and
// positions must lie in the medium-orbit shell (2.0e7 to 3.5e7 m radius).
geo::SatPositionTable parse_sat_csv(std::istream& in);

// Truth labels from the scenario generator: header "t_s,label", label
// "benign" or "spoofed".
std::vector<std::pair<double, bool>> parse_truth_csv(std::istream& in);

struct AlignedDataset {
    std::vector<carrier::ObservationEpoch> observations;
    std::vector<imu::ImuSample> imu;
    double imu_time_offset = 0.0;  // already applied to the imu stream
};

// Applies the clock offset to the inertial stream and drops observation
// epochs outside its span, so every surviving epoch can be interpolated.
// Raises NoOverlap when nothing survives.
AlignedDataset align_streams(std::vector<carrier::ObservationEpoch> obs,
                             std::vector<imu::ImuSample> imu,
                             double imu_time_offset);

}  // namespace spoofdet::ingest
