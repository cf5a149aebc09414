#include "spoofdet/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "internal/civil_time.hpp"

namespace spoofdet::synth {
namespace {

const std::vector<ImuNoisePreset>& preset_table() {
    // Datasheet figures; the magnetometer for the two ST parts is the
    // companion LIS2MDL.
    static const std::vector<ImuNoisePreset> t = {
        {"MTI-3-5A", 0.03, 120.0, 10.0, 7.0, 0.5, true},
        {"SCHA63T", 13.5, 59.6, 1.64, 15.0, 0.0, false},
        {"LSM6DSV", 12.0, 60.0, 3600.0, 2.8, 3.0, true},
        {"LSM6DSR", 10.0, 60.0, 3600.0, 5.0, 3.0, true},
    };
    return t;
}

// Deterministic Gaussian source: explicit Box-Muller over mt19937_64 so the
// stream does not depend on the standard library's distribution algorithm.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform_pm(double bound) { return (2.0 * uniform() - 1.0) * bound; }

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Sub-stream seed: mixes the run seed with a purpose tag so streams stay
// independent of generation order.
std::uint64_t stream_seed(std::uint64_t seed, const std::string& tag) {
    return splitmix64(seed ^ fnv1a(tag));
}

}  // namespace

const ImuNoisePreset& imu_noise_preset(const std::string& name) {
    for (const ImuNoisePreset& p : preset_table()) {
        if (p.name == name) return p;
    }
    throw UnknownPreset("unknown inertial preset '" + name + "'");
}

std::vector<std::string> imu_preset_names() {
    std::vector<std::string> names;
    for (const ImuNoisePreset& p : preset_table()) names.push_back(p.name);
    return names;
}

void ScenarioConfig::validate() const {
    if (!(duration_s > 0.0)) throw ConfigError("duration_s must be positive");
    if (!(gnss_rate_hz > 0.0)) throw ConfigError("gnss_rate_hz must be positive");
    if (!(imu_rate_hz > 0.0)) throw ConfigError("imu_rate_hz must be positive");
    if (satellites.empty()) throw ConfigError("scenario needs satellites");
    for (const SatelliteDef& s : satellites) {
        if (s.channel.wavelength < 0.15 || s.channel.wavelength > 0.30) {
            throw ConfigError("wavelength outside L-band for " + s.channel.key());
        }
    }
    for (const MotionComponent& m : motion) {
        if (std::abs(m.axis.norm() - 1.0) > 1e-6) {
            throw ConfigError("motion axis must be unit length");
        }
        if (m.amplitude < 0.0) throw ConfigError("motion amplitude must be >= 0");
        if (!(m.freq > 0.0)) throw ConfigError("motion frequency must be positive");
    }
    if (phase_noise_sigma < 0.0) throw ConfigError("phase_noise_sigma must be >= 0");
    imu_noise_preset(imu_preset);  // throws on unknown name
    if (attack_window) {
        if (!spoofer) throw ConfigError("attack window without spoofer position");
        const auto [t0, t1] = *attack_window;
        if (!(t0 < t1) || t0 < 0.0 || t1 > duration_s) {
            throw ConfigError("attack window must satisfy 0 <= t0 < t1 <= duration");
        }
    }
    for (const SlipInjection& s : slips) {
        bool known = false;
        for (const SatelliteDef& sat : satellites) {
            if (sat.channel.key() == s.channel_key) known = true;
        }
        if (!known) throw ConfigError("slip references unknown channel " + s.channel_key);
    }
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream in(s);
    while (std::getline(in, part, sep)) out.push_back(part);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + s + "' for " + key);
    }
}

carrier::ChannelId parse_channel(const std::string& sat_id,
                                 const std::string& signal, double wavelength,
                                 const std::string& key) {
    if (sat_id.size() != 3 || !std::isalpha(static_cast<unsigned char>(sat_id[0])) ||
        !std::isdigit(static_cast<unsigned char>(sat_id[1])) ||
        !std::isdigit(static_cast<unsigned char>(sat_id[2]))) {
        throw ConfigError("bad satellite id '" + sat_id + "' for " + key);
    }
    std::string sig = signal;
    if (sig.size() == 3 && sig[0] == 'L') sig = sig.substr(1);
    if (sig.size() != 2) throw ConfigError("bad signal code '" + signal + "' for " + key);
    carrier::ChannelId id;
    id.system = sat_id[0];
    id.prn = (sat_id[1] - '0') * 10 + (sat_id[2] - '0');
    id.signal = sig;
    id.wavelength = wavelength;
    return id;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    ScenarioConfig cfg;
    cfg.satellites.clear();
    std::map<int, SatelliteDef> sats;
    std::map<int, MotionComponent> motions;
    std::map<int, SlipInjection> slips;

    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    const auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("scenario line " + std::to_string(line_no) +
                              ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const auto fields = split(val, ',');

        if (key == "duration_s") cfg.duration_s = to_double(val, key);
        else if (key == "gnss_rate_hz") cfg.gnss_rate_hz = to_double(val, key);
        else if (key == "imu_rate_hz") cfg.imu_rate_hz = to_double(val, key);
        else if (key == "phase_noise_sigma") cfg.phase_noise_sigma = to_double(val, key);
        else if (key == "imu_preset") cfg.imu_preset = val;
        else if (key == "receiver" || key == "spoofer") {
            if (fields.size() != 3) throw ConfigError(key + " needs x,y,z");
            geo::EcefPosition p{to_double(fields[0], key), to_double(fields[1], key),
                                to_double(fields[2], key)};
            if (key == "receiver") cfg.receiver = p;
            else cfg.spoofer = p;
        } else if (key == "clock_drift") {
            if (fields.size() != 3) throw ConfigError("clock_drift needs c0,c1,c2");
            for (int i = 0; i < 3; ++i) cfg.clock_drift[static_cast<std::size_t>(i)] = to_double(fields[static_cast<std::size_t>(i)], key);
        } else if (key == "attack") {
            if (fields.size() != 2) throw ConfigError("attack needs t0,t1");
            cfg.attack_window = {to_double(fields[0], key), to_double(fields[1], key)};
        } else if (key.rfind("sat.", 0) == 0) {
            if (fields.size() != 9) throw ConfigError(key + " needs id,sig,lambda,x,y,z,vx,vy,vz");
            SatelliteDef def;
            def.channel = parse_channel(trim(fields[0]), trim(fields[1]),
                                        to_double(fields[2], key), key);
            def.pos0 = {to_double(fields[3], key), to_double(fields[4], key),
                        to_double(fields[5], key)};
            def.vel = {to_double(fields[6], key), to_double(fields[7], key),
                       to_double(fields[8], key)};
            sats[std::stoi(key.substr(4))] = def;
        } else if (key.rfind("motion.", 0) == 0) {
            if (fields.size() != 6) throw ConfigError(key + " needs ux,uy,uz,amp,freq,phase");
            MotionComponent m;
            m.axis = {to_double(fields[0], key), to_double(fields[1], key),
                      to_double(fields[2], key)};
            const double n = m.axis.norm();
            if (n < 1e-12) throw ConfigError(key + ": zero axis");
            m.axis /= n;
            m.amplitude = to_double(fields[3], key);
            m.freq = to_double(fields[4], key);
            m.phase = to_double(fields[5], key);
            motions[std::stoi(key.substr(7))] = m;
        } else if (key.rfind("slip.", 0) == 0) {
            if (fields.size() != 3) throw ConfigError(key + " needs channel,epoch,cycles");
            SlipInjection s;
            s.channel_key = trim(fields[0]);
            s.epoch = static_cast<std::size_t>(to_double(fields[1], key));
            s.cycles = to_double(fields[2], key);
            slips[std::stoi(key.substr(5))] = s;
        } else {
            throw ConfigError("scenario line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }
    for (auto& [idx, def] : sats) cfg.satellites.push_back(def);
    for (auto& [idx, m] : motions) cfg.motion.push_back(m);
    for (auto& [idx, s] : slips) cfg.slips.push_back(s);
    cfg.validate();
    return cfg;
}

Eigen::Vector3d scenario_displacement(const ScenarioConfig& cfg, double t) {
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    for (const MotionComponent& m : cfg.motion) {
        b += m.amplitude *
             std::sin(2.0 * std::numbers::pi * m.freq * t + m.phase) * m.axis;
    }
    return b;
}

namespace {

Eigen::Vector3d scenario_acceleration(const ScenarioConfig& cfg, double t) {
    Eigen::Vector3d a = Eigen::Vector3d::Zero();
    for (const MotionComponent& m : cfg.motion) {
        const double w = 2.0 * std::numbers::pi * m.freq;
        a -= m.amplitude * w * w * std::sin(w * t + m.phase) * m.axis;
    }
    return a;
}

}  // namespace

GeneratedScenario generate_scenario(const ScenarioConfig& cfg,
                                    std::uint64_t seed) {
    cfg.validate();
    const ImuNoisePreset& preset = imu_noise_preset(cfg.imu_preset);

    GeneratedScenario out;
    out.receiver = cfg.receiver;

    const auto n_epochs = static_cast<std::size_t>(
        std::floor(cfg.duration_s * cfg.gnss_rate_hz)) + 1;
    const auto n_imu = static_cast<std::size_t>(
        std::floor(cfg.duration_s * cfg.imu_rate_hz)) + 1;

    const Eigen::Matrix3d c_enu = geo::ecef_to_enu_rotation(cfg.receiver);

    const auto in_attack = [&](double t) {
        return cfg.attack_window && t >= cfg.attack_window->first &&
               t < cfg.attack_window->second;
    };

    // Satellite table at 1 s cadence; positions are linear in time, so the
    // table's linear interpolation reproduces them exactly.
    for (const SatelliteDef& sat : cfg.satellites) {
        const std::string id = sat.channel.sat();
        double t = 0.0;
        for (;; t += 1.0) {
            if (t > cfg.duration_s) t = cfg.duration_s;
            out.sat_table.add(id, t,
                              geo::EcefPosition::from(sat.pos0.vec() + sat.vel * t));
            if (t >= cfg.duration_s) break;
        }
    }

    // Spoofer direction in the local frame (fixed transmitter).
    Eigen::Vector3d r_sp_enu = Eigen::Vector3d::UnitX();
    if (cfg.spoofer) {
        r_sp_enu = c_enu * geo::los_unit_vector(cfg.receiver, *cfg.spoofer).vec();
    }

    // Carrier phase, channel-major so each channel consumes its own RNG
    // stream.
    std::vector<std::vector<double>> phases(cfg.satellites.size());
    std::vector<std::vector<bool>> locks(cfg.satellites.size());
    std::vector<double> cn0_offsets(cfg.satellites.size());
    for (std::size_t j = 0; j < cfg.satellites.size(); ++j) {
        const SatelliteDef& sat = cfg.satellites[j];
        Rng rng(stream_seed(seed, "chan:" + sat.channel.key()));
        const double ambiguity = std::floor(rng.uniform_pm(1e5));
        cn0_offsets[j] = 40.0 + std::floor(rng.uniform() * 10.0);

        double slip_accum = 0.0;
        std::vector<double>& ph = phases[j];
        std::vector<bool>& lk = locks[j];
        ph.resize(n_epochs);
        lk.assign(n_epochs, false);
        for (std::size_t i = 0; i < n_epochs; ++i) {
            const double t = static_cast<double>(i) / cfg.gnss_rate_hz;
            const Eigen::Vector3d sat_pos = sat.pos0.vec() + sat.vel * t;
            const double rho = (sat_pos - cfg.receiver.vec()).norm();
            const Eigen::Vector3d los_enu =
                c_enu * (sat_pos - cfg.receiver.vec()).normalized();
            const Eigen::Vector3d b = scenario_displacement(cfg, t);
            const double proj =
                (in_attack(t) ? r_sp_enu : los_enu).dot(b);
            const double clock = cfg.clock_drift[0] + cfg.clock_drift[1] * t +
                                 0.5 * cfg.clock_drift[2] * t * t;
            for (const SlipInjection& s : cfg.slips) {
                if (s.channel_key == sat.channel.key() && s.epoch == i) {
                    slip_accum += s.cycles;
                }
            }
            ph[i] = rho / sat.channel.wavelength +
                    proj / sat.channel.wavelength + clock + ambiguity +
                    slip_accum +
                    cfg.phase_noise_sigma * rng.gauss();
        }
    }

    out.observations.resize(n_epochs);
    out.truth.reserve(n_epochs);
    for (std::size_t i = 0; i < n_epochs; ++i) {
        const double t = static_cast<double>(i) / cfg.gnss_rate_hz;
        carrier::ObservationEpoch& ep = out.observations[i];
        ep.t = t;
        ep.obs.reserve(cfg.satellites.size());
        for (std::size_t j = 0; j < cfg.satellites.size(); ++j) {
            carrier::Observation ob;
            ob.phase = phases[j][i];
            ob.lock_lost = locks[j][i];
            ob.cn0 = cn0_offsets[j];
            ep.obs.emplace_back(cfg.satellites[j].channel, ob);
        }
        std::sort(ep.obs.begin(), ep.obs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        out.truth.emplace_back(t, in_attack(t));
    }

    // Inertial stream: exact analytic sway acceleration plus gravity in a
    // level body frame, with preset bias and white noise.
    Rng imu_rng(stream_seed(seed, "imu"));
    const double g0 = imu::kGravity;
    const double acc_bias_bound = preset.accel_bias_mg * 1e-3 * g0;
    const double acc_sigma = preset.accel_noise_ug_sqrthz * 1e-6 * g0 *
                             std::sqrt(cfg.imu_rate_hz / 2.0);
    const double gyro_bias_bound =
        preset.gyro_bias_deg_h * (std::numbers::pi / 180.0) / 3600.0;
    const double gyro_sigma = preset.gyro_noise_mdeg_s_sqrthz * 1e-3 *
                              (std::numbers::pi / 180.0) *
                              std::sqrt(cfg.imu_rate_hz / 2.0);
    const double mag_sigma = preset.mag_noise_mgauss * 0.1;  // uT

    const Eigen::Vector3d acc_bias{imu_rng.uniform_pm(acc_bias_bound),
                                   imu_rng.uniform_pm(acc_bias_bound),
                                   imu_rng.uniform_pm(acc_bias_bound)};
    const Eigen::Vector3d gyro_bias{imu_rng.uniform_pm(gyro_bias_bound),
                                    imu_rng.uniform_pm(gyro_bias_bound),
                                    imu_rng.uniform_pm(gyro_bias_bound)};
    // Mid-latitude field, horizontal component due north.
    const Eigen::Vector3d mag_ref{0.0, 15.4, -49.5};

    out.imu.reserve(n_imu);
    for (std::size_t i = 0; i < n_imu; ++i) {
        const double t = static_cast<double>(i) / cfg.imu_rate_hz;
        imu::ImuSample s;
        s.t = t;
        const Eigen::Vector3d a = scenario_acceleration(cfg, t);
        s.specific_force =
            a + Eigen::Vector3d(0.0, 0.0, g0) + acc_bias +
            Eigen::Vector3d(acc_sigma * imu_rng.gauss(),
                            acc_sigma * imu_rng.gauss(),
                            acc_sigma * imu_rng.gauss());
        s.angular_rate =
            gyro_bias + Eigen::Vector3d(gyro_sigma * imu_rng.gauss(),
                                        gyro_sigma * imu_rng.gauss(),
                                        gyro_sigma * imu_rng.gauss());
        if (preset.has_mag) {
            s.magnetic =
                mag_ref + Eigen::Vector3d(mag_sigma * imu_rng.gauss(),
                                          mag_sigma * imu_rng.gauss(),
                                          mag_sigma * imu_rng.gauss());
        }
        out.imu.push_back(std::move(s));
    }
    return out;
}

namespace {

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void pad_to(std::string& line, std::size_t width) {
    if (line.size() < width) line.append(width - line.size(), ' ');
}

std::string header_line(std::string content, const std::string& label) {
    pad_to(content, 60);
    return content + label + "\n";
}

void split_seconds(double t, std::int64_t& day, int& hh, int& mm, double& ss) {
    const double total = t;
    std::int64_t whole = static_cast<std::int64_t>(std::floor(total));
    double frac = total - static_cast<double>(whole);
    std::int64_t sec_of_day = whole % 86400;
    day = internal::kBaseDay + whole / 86400;
    if (sec_of_day < 0) {
        sec_of_day += 86400;
        day -= 1;
    }
    hh = static_cast<int>(sec_of_day / 3600);
    mm = static_cast<int>((sec_of_day % 3600) / 60);
    ss = static_cast<double>(sec_of_day % 60) + frac;
}

int ssi_digit(double cn0) {
    const int d = static_cast<int>(cn0 / 6.0);
    return std::clamp(d, 1, 9);
}

}  // namespace

void write_rinex_obs(std::ostream& os,
                     const std::vector<carrier::ObservationEpoch>& epochs,
                     const geo::EcefPosition& receiver) {
    // Discover the channel set and group by constellation.
    std::map<char, std::vector<std::string>> sys_codes;
    for (const carrier::ObservationEpoch& ep : epochs) {
        for (const auto& [id, ob] : ep.obs) {
            auto& codes = sys_codes[id.system];
            const std::string lc = id.phase_code();
            if (std::find(codes.begin(), codes.end(), lc) == codes.end()) {
                codes.push_back(lc);
                codes.push_back(id.cn0_code());
            }
        }
    }
    for (auto& [sys, codes] : sys_codes) std::sort(codes.begin(), codes.end());

    os << header_line("     3.04           OBSERVATION DATA    M",
                      "RINEX VERSION / TYPE");
    os << header_line("synthgen            synthgen            20240101 000000 UTC",
                      "PGM / RUN BY / DATE");
    os << header_line("SIM0", "MARKER NAME");
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%14.4f%14.4f%14.4f", receiver.x,
                      receiver.y, receiver.z);
        os << header_line(buf, "APPROX POSITION XYZ");
    }
    for (const auto& [sys, codes] : sys_codes) {
        std::string line(1, sys);
        char cnt[8];
        std::snprintf(cnt, sizeof cnt, "  %3zu", codes.size());
        line += cnt;
        for (const std::string& c : codes) line += " " + c;
        os << header_line(line, "SYS / # / OBS TYPES");
    }
    {
        const auto cd = internal::civil_from_days(internal::kBaseDay);
        char buf[80];
        std::snprintf(buf, sizeof buf,
                      "  %4d    %2d    %2d    %2d    %2d   %10.7f     GPS",
                      cd.year, cd.month, cd.day, 0, 0, 0.0);
        os << header_line(buf, "TIME OF FIRST OBS");
    }
    os << header_line("", "END OF HEADER");

    for (const carrier::ObservationEpoch& ep : epochs) {
        std::int64_t day;
        int hh, mm;
        double ss;
        split_seconds(ep.t, day, hh, mm, ss);
        const auto cd = internal::civil_from_days(day);
        char head[64];
        std::snprintf(head, sizeof head, "> %04d %02d %02d %02d %02d %010.7f  0%3zu",
                      cd.year, cd.month, cd.day, hh, mm, ss,
                      [&] {
                          std::vector<std::string> sats;
                          for (const auto& [id, ob] : ep.obs) {
                              const std::string s = id.sat();
                              if (std::find(sats.begin(), sats.end(), s) == sats.end()) {
                                  sats.push_back(s);
                              }
                          }
                          return sats.size();
                      }());
        os << head << "\n";

        // One line per satellite, fields in the order declared for its
        // system.
        std::vector<std::string> sat_order;
        std::map<std::string, std::vector<std::pair<std::string, const carrier::Observation*>>> per_sat;
        for (const auto& [id, ob] : ep.obs) {
            const std::string s = id.sat();
            if (per_sat.find(s) == per_sat.end()) sat_order.push_back(s);
            per_sat[s].emplace_back(id.phase_code(), &ob);
        }
        std::sort(sat_order.begin(), sat_order.end());
        for (const std::string& s : sat_order) {
            std::string line = s;
            const auto& codes = sys_codes.at(s[0]);
            for (const std::string& code : codes) {
                const carrier::Observation* ob = nullptr;
                for (const auto& [lc, p] : per_sat[s]) {
                    if (lc == code || ("S" + lc.substr(1)) == code) ob = p;
                }
                if (ob == nullptr) {
                    line.append(16, ' ');
                    continue;
                }
                char field[32];
                if (code[0] == 'L') {
                    std::snprintf(field, sizeof field, "%14.3f%c%c", ob->phase,
                                  ob->lock_lost ? '1' : ' ',
                                  ob->cn0 ? static_cast<char>('0' + ssi_digit(*ob->cn0))
                                          : ' ');
                } else {
                    std::snprintf(field, sizeof field, "%14.3f  ",
                                  ob->cn0.value_or(0.0));
                }
                line += field;
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            os << line << "\n";
        }
    }
}

void write_imu_csv(std::ostream& os, const std::vector<imu::ImuSample>& samples) {
    os << "t_s,ax,ay,az,gx,gy,gz,mx,my,mz\n";
    for (const imu::ImuSample& s : samples) {
        os << shortest(s.t) << ',' << shortest(s.specific_force.x()) << ','
           << shortest(s.specific_force.y()) << ','
           << shortest(s.specific_force.z()) << ','
           << shortest(s.angular_rate.x()) << ','
           << shortest(s.angular_rate.y()) << ','
           << shortest(s.angular_rate.z()) << ',';
        if (s.magnetic) {
            os << shortest(s.magnetic->x()) << ',' << shortest(s.magnetic->y())
               << ',' << shortest(s.magnetic->z());
        } else {
            os << ",,";
        }
        os << '\n';
    }
}

void write_sat_csv(std::ostream& os, const geo::SatPositionTable& table) {
    os << "t_s,sat,x_m,y_m,z_m\n";
    auto rows = table.knots();
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) {
                         return std::get<1>(a) < std::get<1>(b);
                     });
    for (const auto& [sat, t, pos] : rows) {
        os << shortest(t) << ',' << sat << ',' << shortest(pos.x) << ','
           << shortest(pos.y) << ',' << shortest(pos.z) << '\n';
    }
}

void write_truth_csv(std::ostream& os,
                     const std::vector<std::pair<double, bool>>& truth) {
    os << "t_s,label\n";
    for (const auto& [t, spoofed] : truth) {
        os << shortest(t) << ',' << (spoofed ? "spoofed" : "benign") << '\n';
    }
}

}  // namespace spoofdet::synth
