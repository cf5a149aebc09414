#include "spoofdet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "internal/civil_time.hpp"

namespace spoofdet::ingest {
namespace {

std::string rstrip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::optional<double> parse_double(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end != begin + s.size() || errno == ERANGE || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<long> parse_long(const std::string& raw) {
    const std::string s = trim(raw);
    if (s.empty()) return std::nullopt;
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(begin, &end, 10);
    if (end != begin + s.size() || errno == ERANGE) return std::nullopt;
    return v;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Carrier frequency by constellation and band digit; 0 when the signal is
// outside the modeled set (notably GLONASS FDMA, which needs a slot).
double carrier_wavelength(char sys, char band) {
    constexpr double c = 299792458.0;
    double f = 0.0;
    switch (sys) {
        case 'G':
            if (band == '1') f = 1575.42e6;
            else if (band == '2') f = 1227.60e6;
            else if (band == '5') f = 1176.45e6;
            break;
        case 'E':
            if (band == '1') f = 1575.42e6;
            else if (band == '5') f = 1176.45e6;
            else if (band == '6') f = 1278.75e6;
            else if (band == '7') f = 1207.14e6;
            else if (band == '8') f = 1191.795e6;
            break;
        case 'C':
            if (band == '1' || band == '2') f = 1561.098e6;
            else if (band == '5') f = 1176.45e6;
            else if (band == '6') f = 1268.52e6;
            else if (band == '7') f = 1207.14e6;
            break;
        case 'J':
            if (band == '1') f = 1575.42e6;
            else if (band == '2') f = 1227.60e6;
            else if (band == '5') f = 1176.45e6;
            break;
        default:
            break;
    }
    return f > 0.0 ? c / f : 0.0;
}

bool valid_sat_id(const std::string& s) {
    return s.size() == 3 && std::isalpha(static_cast<unsigned char>(s[0])) &&
           std::isdigit(static_cast<unsigned char>(s[1])) &&
           std::isdigit(static_cast<unsigned char>(s[2]));
}

}  // namespace

RinexObsFile parse_rinex_obs(std::istream& in) {
    RinexObsFile out;
    std::map<char, std::vector<std::string>> sys_codes;
    bool have_version = false;
    bool in_header = true;
    char last_sys = '\0';

    long line_no = 0;
    std::string raw;

    carrier::ObservationEpoch current;
    bool have_epoch = false;
    bool skip_epoch = false;
    double last_t = -std::numeric_limits<double>::infinity();

    const auto finalize_epoch = [&](long at_line) {
        if (!have_epoch) return;
        std::sort(current.obs.begin(), current.obs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const auto dup = std::adjacent_find(
            current.obs.begin(), current.obs.end(),
            [](const auto& a, const auto& b) { return a.first == b.first; });
        if (dup != current.obs.end()) {
            throw MalformedEpoch("duplicate channel in epoch", at_line);
        }
        out.epochs.push_back(std::move(current));
        current = {};
        have_epoch = false;
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = rstrip(raw);

        if (in_header) {
            if (line.size() < 61) continue;  // no label field; ignore
            const std::string label = trim(line.substr(60));
            if (label == "RINEX VERSION / TYPE") {
                const auto ver = parse_double(line.substr(0, 9));
                if (!ver) throw MalformedHeader("unreadable version", line_no);
                if (*ver < 3.0 || *ver >= 4.0) {
                    throw UnsupportedVersion("only RINEX 3.x observation files", line_no);
                }
                if (line.size() < 21 || line[20] != 'O') {
                    throw MalformedHeader("not an observation file", line_no);
                }
                have_version = true;
            } else if (label == "APPROX POSITION XYZ") {
                std::istringstream fs(line.substr(0, 60));
                double x, y, z;
                if (fs >> x >> y >> z) {
                    out.approx_position = geo::EcefPosition{x, y, z};
                } else {
                    throw MalformedHeader("unreadable approximate position", line_no);
                }
            } else if (label == "SYS / # / OBS TYPES") {
                char sys = line[0];
                if (sys == ' ') {
                    sys = last_sys;
                    if (sys == '\0') {
                        throw MalformedHeader("observation-type continuation before declaration", line_no);
                    }
                } else {
                    last_sys = sys;
                }
                std::istringstream fs(line.substr(std::min<std::size_t>(6, line.size()), 54));
                std::string tok;
                while (fs >> tok) {
                    if (tok.size() == 3 && std::isalpha(static_cast<unsigned char>(tok[0]))) {
                        sys_codes[sys].push_back(tok);
                    }
                }
            } else if (label == "END OF HEADER") {
                if (!have_version) {
                    throw MalformedHeader("missing version line", line_no);
                }
                in_header = false;
            }
            continue;
        }

        if (line.empty()) continue;

        if (line[0] == '>') {
            finalize_epoch(line_no);
            std::istringstream fs(line.substr(1));
            long y, mo, d, h, mi;
            double sec;
            if (!(fs >> y >> mo >> d >> h >> mi >> sec)) {
                throw MalformedEpoch("unreadable epoch record", line_no);
            }
            if (y < 1900 || y > 2200 || mo < 1 || mo > 12 || d < 1 || d > 31 ||
                h < 0 || h > 23 || mi < 0 || mi > 59 || sec < 0.0 || sec >= 61.0) {
                throw MalformedEpoch("epoch fields out of range", line_no);
            }
            long flag = 0;
            fs >> flag;
            const double t =
                static_cast<double>(internal::days_from_civil(
                    static_cast<int>(y), static_cast<int>(mo), static_cast<int>(d)) -
                                    internal::kBaseDay) * 86400.0 +
                static_cast<double>(h) * 3600.0 + static_cast<double>(mi) * 60.0 + sec;
            if (t <= last_t) {
                throw NonMonotonicTime("epochs must be strictly increasing", line_no);
            }
            last_t = t;
            current.t = t;
            have_epoch = true;
            skip_epoch = flag > 1;  // event records carry no observations
            continue;
        }

        if (!have_epoch) {
            throw MalformedEpoch("observation line before first epoch", line_no);
        }
        if (skip_epoch) continue;

        if (line.size() < 3 || !valid_sat_id(line.substr(0, 3))) {
            throw MalformedEpoch("unreadable satellite id", line_no);
        }
        const std::string sat = line.substr(0, 3);
        const char sys = sat[0];
        const auto codes_it = sys_codes.find(sys);
        if (codes_it == sys_codes.end()) {
            ++out.skipped_fields;
            continue;
        }
        const std::vector<std::string>& codes = codes_it->second;

        struct Parsed {
            std::string code;
            double value;
            char lli;
        };
        std::vector<Parsed> fields;
        for (std::size_t i = 0; i < codes.size(); ++i) {
            const std::size_t off = 3 + 16 * i;
            if (off >= line.size()) break;
            const std::string cell = line.substr(off, 14);
            const auto v = parse_double(cell);
            if (!v) {
                if (!trim(cell).empty()) {
                    throw MalformedEpoch("unreadable observation value", line_no);
                }
                continue;
            }
            const char lli = off + 14 < line.size() ? line[off + 14] : ' ';
            fields.push_back({codes[i], *v, lli});
        }

        const int prn = (sat[1] - '0') * 10 + (sat[2] - '0');
        for (const Parsed& f : fields) {
            if (f.code[0] != 'L') continue;
            const double wl = carrier_wavelength(sys, f.code[1]);
            if (wl <= 0.0) {
                ++out.skipped_fields;
                continue;
            }
            carrier::ChannelId id;
            id.system = sys;
            id.prn = prn;
            id.signal = f.code.substr(1);
            id.wavelength = wl;

            carrier::Observation ob;
            ob.phase = f.value;
            ob.lock_lost =
                std::isdigit(static_cast<unsigned char>(f.lli)) && ((f.lli - '0') & 1);
            for (const Parsed& s : fields) {
                if (s.code[0] == 'S' && s.code.substr(1) == id.signal) {
                    ob.cn0 = s.value;
                }
            }
            current.obs.emplace_back(id, ob);
        }
        for (const Parsed& f : fields) {
            if (f.code[0] != 'L' && f.code[0] != 'S') ++out.skipped_fields;
        }
    }

    if (in_header) {
        throw MalformedHeader("missing END OF HEADER", line_no);
    }
    finalize_epoch(line_no);
    return out;
}

std::vector<imu::ImuSample> parse_imu_csv(std::istream& in) {
    std::string raw;
    long line_no = 0;
    if (!std::getline(in, raw)) {
        throw SchemaMismatch("empty inertial file", 1);
    }
    ++line_no;
    if (rstrip(raw) != "t_s,ax,ay,az,gx,gy,gz,mx,my,mz") {
        throw SchemaMismatch("unexpected inertial header", line_no);
    }

    std::vector<imu::ImuSample> out;
    double last_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = rstrip(raw);
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 10) {
            throw SchemaMismatch("expected 10 columns", line_no);
        }
        double vals[7];
        for (int i = 0; i < 7; ++i) {
            const auto v = parse_double(f[static_cast<std::size_t>(i)]);
            if (!v) throw MalformedEpoch("unreadable number", line_no);
            vals[i] = *v;
        }
        imu::ImuSample s;
        s.t = vals[0];
        if (s.t <= last_t) {
            throw NonMonotonicTime("timestamps must be strictly increasing", line_no);
        }
        last_t = s.t;
        s.specific_force = {vals[1], vals[2], vals[3]};
        s.angular_rate = {vals[4], vals[5], vals[6]};
        const bool m_empty[3] = {trim(f[7]).empty(), trim(f[8]).empty(),
                                 trim(f[9]).empty()};
        if (m_empty[0] && m_empty[1] && m_empty[2]) {
            s.magnetic = std::nullopt;
        } else if (!m_empty[0] && !m_empty[1] && !m_empty[2]) {
            double m[3];
            for (int i = 0; i < 3; ++i) {
                const auto v = parse_double(f[static_cast<std::size_t>(7 + i)]);
                if (!v) throw MalformedEpoch("unreadable number", line_no);
                m[i] = *v;
            }
            s.magnetic = Eigen::Vector3d{m[0], m[1], m[2]};
        } else {
            throw MalformedEpoch("magnetometer fields must be all present or all empty", line_no);
        }
        out.push_back(std::move(s));
    }
    return out;
}

geo::SatPositionTable parse_sat_csv(std::istream& in) {
    std::string raw;
    long line_no = 0;
    if (!std::getline(in, raw)) {
        throw SchemaMismatch("empty satellite file", 1);
    }
    ++line_no;
    if (rstrip(raw) != "t_s,sat,x_m,y_m,z_m") {
        throw SchemaMismatch("unexpected satellite header", line_no);
    }

    geo::SatPositionTable table;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = rstrip(raw);
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 5) {
            throw SchemaMismatch("expected 5 columns", line_no);
        }
        const auto t = parse_double(f[0]);
        const auto x = parse_double(f[2]);
        const auto y = parse_double(f[3]);
        const auto z = parse_double(f[4]);
        if (!t || !x || !y || !z) {
            throw MalformedEpoch("unreadable number", line_no);
        }
        const std::string sat = trim(f[1]);
        if (!valid_sat_id(sat)) {
            throw MalformedEpoch("unreadable satellite id", line_no);
        }
        const geo::EcefPosition pos{*x, *y, *z};
        const double r = pos.vec().norm();
        if (r <= 2.0e7 || r >= 3.5e7) {
            throw MalformedEpoch("position outside the medium-orbit shell", line_no);
        }
        try {
            table.add(sat, *t, pos);
        } catch (const OutOfRange&) {
            throw NonMonotonicTime("satellite times must be strictly increasing", line_no);
        }
    }
    return table;
}

std::vector<std::pair<double, bool>> parse_truth_csv(std::istream& in) {
    std::string raw;
    long line_no = 0;
    if (!std::getline(in, raw)) {
        throw SchemaMismatch("empty truth file", 1);
    }
    ++line_no;
    if (rstrip(raw) != "t_s,label") {
        throw SchemaMismatch("unexpected truth header", line_no);
    }
    std::vector<std::pair<double, bool>> out;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = rstrip(raw);
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 2) throw SchemaMismatch("expected 2 columns", line_no);
        const auto t = parse_double(f[0]);
        if (!t) throw MalformedEpoch("unreadable number", line_no);
        const std::string label = trim(f[1]);
        if (label != "benign" && label != "spoofed") {
            throw MalformedEpoch("label must be benign or spoofed", line_no);
        }
        out.emplace_back(*t, label == "spoofed");
    }
    return out;
}

AlignedDataset align_streams(std::vector<carrier::ObservationEpoch> obs,
                             std::vector<imu::ImuSample> imu,
                             double imu_time_offset) {
    AlignedDataset out;
    out.imu_time_offset = imu_time_offset;
    for (imu::ImuSample& s : imu) s.t += imu_time_offset;
    if (imu.empty()) throw NoOverlap("no inertial samples");
    const double lo = imu.front().t;
    const double hi = imu.back().t;

    for (carrier::ObservationEpoch& ep : obs) {
        if (ep.t >= lo - 1e-9 && ep.t <= hi + 1e-9) {
            out.observations.push_back(std::move(ep));
        }
    }
    if (out.observations.empty()) {
        throw NoOverlap("observation epochs and inertial stream do not overlap");
    }
    out.imu = std::move(imu);
    return out;
}

}  // namespace spoofdet::ingest
