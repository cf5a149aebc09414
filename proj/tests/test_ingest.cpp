#include <doctest.h>

#include <spoofdet/errors.hpp>
#include <spoofdet/geo.hpp>
#include <spoofdet/ingest.hpp>
#include <spoofdet/synth.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace spoofdet;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kL1 = 299792458.0 / 1575.42e6;  // m

// 60-column content field followed by the header label.
std::string hl(std::string content, const std::string& label) {
  if (content.size() < 60) content.append(60 - content.size(), ' ');
  return content + label + "\n";
}

std::string basic_header() {
  std::string h;
  h += hl("     3.04           OBSERVATION DATA    M", "RINEX VERSION / TYPE");
  h += hl("  3097700.0000  1011000.0000  5463100.0000", "APPROX POSITION XYZ");
  h += hl("G    2 L1C S1C", "SYS / # / OBS TYPES");
  h += hl("", "END OF HEADER");
  return h;
}

ingest::RinexObsFile parse(const std::string& text) {
  std::istringstream in(text);
  return ingest::parse_rinex_obs(in);
}

geo::EcefPosition test_receiver() {
  return geo::geodetic_to_ecef(59.35 * kPi / 180.0, 18.07 * kPi / 180.0, 30.0);
}

// Scenario small enough to serialize and re-read in its entirety.
synth::ScenarioConfig round_trip_config() {
  synth::ScenarioConfig cfg;
  cfg.duration_s = 5.0;
  cfg.gnss_rate_hz = 20.0;
  cfg.imu_rate_hz = 100.0;
  cfg.receiver = test_receiver();
  const double az[] = {30, 150, 260, 330};
  const double el[] = {60, 35, 45, 70};
  for (int i = 0; i < 4; ++i) {
    const double a = az[i] * kPi / 180.0, e = el[i] * kPi / 180.0;
    synth::SatelliteDef sat;
    sat.channel = carrier::ChannelId{'G', i + 1, "1C", kL1};
    sat.pos0 = geo::offset_enu(
        cfg.receiver,
        Eigen::Vector3d{std::sin(a) * std::cos(e), std::cos(a) * std::cos(e),
                        std::sin(e)} *
            2.2e7);
    sat.vel = sat.pos0.vec().cross(Eigen::Vector3d(0.2, 0.5, 0.84)).normalized() * 2800.0;
    cfg.satellites.push_back(sat);
  }
  cfg.motion.push_back({Eigen::Vector3d(1.0, 0.4, 0.2).normalized(), 0.05, 2.0, 0.3});
  cfg.clock_drift = {0.3, 2.0, 0.05};
  cfg.phase_noise_sigma = 0.01;
  cfg.imu_preset = "LSM6DSV";
  cfg.slips.push_back({"G02:1C", 40, 2.0});
  return cfg;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("observation parser echoes a crafted file") {
  std::string text = basic_header();
  text += "> 2024 01 02 03 04 05.0000000  0  1\n";
  text += "G01    123456.789 7        45.000\n";

  const auto file = parse(text);
  REQUIRE(file.approx_position.has_value());
  CHECK(file.approx_position->x == 3097700.0);
  CHECK(file.approx_position->y == 1011000.0);
  CHECK(file.approx_position->z == 5463100.0);
  CHECK(file.skipped_fields == 0);

  REQUIRE(file.epochs.size() == 1);
  const auto& ep = file.epochs[0];
  CHECK(ep.t == 86400.0 + 3.0 * 3600.0 + 4.0 * 60.0 + 5.0);
  REQUIRE(ep.obs.size() == 1);
  const auto& [id, ob] = ep.obs[0];
  CHECK(id.system == 'G');
  CHECK(id.prn == 1);
  CHECK(id.signal == "1C");
  CHECK(id.wavelength == kL1);
  CHECK(ob.phase == 123456.789);
  CHECK_FALSE(ob.lock_lost);
  REQUIRE(ob.cn0.has_value());
  CHECK(*ob.cn0 == 45.0);
}

TEST_CASE("loss-of-lock indicator drives the lock flag") {
  const auto make = [](char lli) {
    std::string text = basic_header();
    text += "> 2024 01 01 00 00 00.0000000  0  1\n";
    text += "G01      1000.500" + std::string(1, lli) + "\n";
    return parse(text);
  };
  CHECK_FALSE(make(' ').epochs[0].obs[0].second.lock_lost);
  CHECK(make('1').epochs[0].obs[0].second.lock_lost);
  CHECK_FALSE(make('2').epochs[0].obs[0].second.lock_lost);  // bit 0 only
  CHECK(make('3').epochs[0].obs[0].second.lock_lost);
  CHECK_FALSE(make('0').epochs[0].obs[0].second.lock_lost);
}

TEST_CASE("observation parser rejects other versions") {
  std::string v2 = basic_header();
  v2.replace(0, 9, "     2.11");
  CHECK_THROWS_AS(parse(v2), UnsupportedVersion);
  std::string v4 = basic_header();
  v4.replace(0, 9, "     4.00");
  CHECK_THROWS_AS(parse(v4), UnsupportedVersion);
  try {
    parse(v2);
    FAIL("expected UnsupportedVersion");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("(line 1)") != std::string::npos);
  }
}

TEST_CASE("observation parser flags broken headers") {
  // Unreadable version number.
  std::string bad = basic_header();
  bad.replace(0, 9, "   halt  ");
  CHECK_THROWS_AS(parse(bad), MalformedHeader);

  // Navigation file is not an observation file.
  std::string nav = basic_header();
  nav.replace(20, 1, "N");
  CHECK_THROWS_AS(parse(nav), MalformedHeader);

  // Approximate position with letters in it.
  std::string pos;
  pos += hl("     3.04           OBSERVATION DATA    M", "RINEX VERSION / TYPE");
  pos += hl("  here          1011000.0000  5463100.0000", "APPROX POSITION XYZ");
  pos += hl("", "END OF HEADER");
  CHECK_THROWS_AS(parse(pos), MalformedHeader);

  // Continuation with no preceding declaration.
  std::string cont;
  cont += hl("     3.04           OBSERVATION DATA    M", "RINEX VERSION / TYPE");
  cont += hl("       L5Q S5Q", "SYS / # / OBS TYPES");
  cont += hl("", "END OF HEADER");
  CHECK_THROWS_AS(parse(cont), MalformedHeader);

  // End of header before a version line.
  std::string nover = hl("", "END OF HEADER");
  CHECK_THROWS_AS(parse(nover), MalformedHeader);

  // Header never ends.
  std::string open = hl("     3.04           OBSERVATION DATA    M",
                        "RINEX VERSION / TYPE");
  try {
    parse(open);
    FAIL("expected MalformedHeader");
  } catch (const MalformedHeader& e) {
    CHECK(e.line == 1);
  }
}

TEST_CASE("observation parser flags broken epochs with their line") {
  const std::string head = basic_header();  // 4 lines

  CHECK_THROWS_AS(parse(head + "G01      1000.500\n"), MalformedEpoch);
  CHECK_THROWS_AS(parse(head + "> not a time stamp\n"), MalformedEpoch);
  CHECK_THROWS_AS(parse(head + "> 2024 13 01 00 00 00.0000000  0  1\n"),
                  MalformedEpoch);
  CHECK_THROWS_AS(parse(head + "> 2024 01 01 00 00 -1.0000000  0  1\n"),
                  MalformedEpoch);
  CHECK_THROWS_AS(
      parse(head + "> 2024 01 01 00 00 00.0000000  0  1\n?? junk\n"),
      MalformedEpoch);
  CHECK_THROWS_AS(
      parse(head + "> 2024 01 01 00 00 00.0000000  0  1\nG01    12a456.789\n"),
      MalformedEpoch);
  // NaN and infinity are not observations.
  CHECK_THROWS_AS(
      parse(head + "> 2024 01 01 00 00 00.0000000  0  1\nG01           inf\n"),
      MalformedEpoch);

  try {
    parse(head + "> 2024 01 01 00 00 00.0000000  0  1\nG01    12a456.789\n");
    FAIL("expected MalformedEpoch");
  } catch (const MalformedEpoch& e) {
    CHECK(e.line == 6);
  }

  // The same channel twice in one epoch.
  std::string dup = head;
  dup += "> 2024 01 01 00 00 00.0000000  0  1\n";
  dup += "G01      1000.500\n";
  dup += "G01      2000.500\n";
  CHECK_THROWS_AS(parse(dup), MalformedEpoch);
}

TEST_CASE("observation epochs must move forward") {
  std::string text = basic_header();
  text += "> 2024 01 01 00 01 00.0000000  0  1\n";
  text += "G01      1000.500\n";
  text += "> 2024 01 01 00 00 30.0000000  0  1\n";
  text += "G01      1001.500\n";
  try {
    parse(text);
    FAIL("expected NonMonotonicTime");
  } catch (const NonMonotonicTime& e) {
    CHECK(e.line == 7);
  }
}

TEST_CASE("event records carry no observations") {
  std::string text = basic_header();
  text += "> 2024 01 01 00 00 00.0000000  0  1\n";
  text += "G01      1000.500\n";
  text += "> 2024 01 01 00 01 00.0000000  2  1\n";
  text += "ANTENNA JOSTLED\n";
  text += "> 2024 01 01 00 02 00.0000000  0  1\n";
  text += "G01      1002.500\n";

  const auto file = parse(text);
  REQUIRE(file.epochs.size() == 3);
  CHECK(file.epochs[0].obs.size() == 1);
  CHECK(file.epochs[1].obs.empty());
  CHECK(file.epochs[2].obs.size() == 1);
}

TEST_CASE("unmodeled constellations and codes are counted, not fatal") {
  std::string text;
  text += hl("     3.04           OBSERVATION DATA    M", "RINEX VERSION / TYPE");
  text += hl("G    3 L1C S1C C1C", "SYS / # / OBS TYPES");
  text += hl("R    2 L1C S1C", "SYS / # / OBS TYPES");
  text += hl("", "END OF HEADER");
  text += "> 2024 01 01 00 00 00.0000000  0  3\n";
  // Pseudorange C1C adds one skip; GLONASS FDMA wavelength unknown adds one;
  // an undeclared constellation adds one more.
  text += "G01      1000.500 8      2000.000        555.000\n";
  text += "R05      3000.500\n";
  text += "E09      4000.500\n";

  const auto file = parse(text);
  REQUIRE(file.epochs.size() == 1);
  REQUIRE(file.epochs[0].obs.size() == 1);
  CHECK(file.epochs[0].obs[0].first.system == 'G');
  CHECK(*file.epochs[0].obs[0].second.cn0 == 2000.0);
  CHECK(file.skipped_fields == 3);
  CHECK_FALSE(file.approx_position.has_value());
}

TEST_CASE("observation-type continuations extend the previous system") {
  std::string text;
  text += hl("     3.04           OBSERVATION DATA    M", "RINEX VERSION / TYPE");
  text += hl("G    4 L1C S1C", "SYS / # / OBS TYPES");
  text += hl("       L5Q S5Q", "SYS / # / OBS TYPES");
  text += hl("", "END OF HEADER");
  text += "> 2024 01 01 00 00 00.0000000  0  1\n";
  // Cells are 16 columns wide: value(14), flag, strength digit.
  text +=
      "G07"
      "      1000.500" " 6"
      "        47.000" "  "
      "      2000.125" " 6"
      "        47.000" "\n";

  const auto file = parse(text);
  REQUIRE(file.epochs.size() == 1);
  REQUIRE(file.epochs[0].obs.size() == 2);
  CHECK(file.epochs[0].obs[0].first.signal == "1C");
  CHECK(file.epochs[0].obs[0].second.phase == 1000.5);
  CHECK(file.epochs[0].obs[1].first.signal == "5Q");
  CHECK(file.epochs[0].obs[1].first.wavelength ==
        299792458.0 / 1176.45e6);
  CHECK(file.epochs[0].obs[1].second.phase == 2000.125);
  REQUIRE(file.epochs[0].obs[1].second.cn0.has_value());
  CHECK(*file.epochs[0].obs[1].second.cn0 == 47.0);
}

TEST_CASE("generated scenarios survive the writer-parser loop") {
  auto cfg = round_trip_config();
  auto gen = synth::generate_scenario(cfg, 314);
  gen.observations[3].obs[1].second.lock_lost = true;  // exercise the flag

  std::ostringstream os;
  synth::write_rinex_obs(os, gen.observations, cfg.receiver);
  const auto file = parse(os.str());

  CHECK(file.skipped_fields == 0);
  REQUIRE(file.approx_position.has_value());
  CHECK(file.approx_position->x == doctest::Approx(cfg.receiver.x).epsilon(1e-9));
  REQUIRE(file.epochs.size() == gen.observations.size());
  for (std::size_t i = 0; i < file.epochs.size(); ++i) {
    const auto& got = file.epochs[i];
    const auto& want = gen.observations[i];
    CHECK(got.t == want.t);
    REQUIRE(got.obs.size() == want.obs.size());
    for (std::size_t j = 0; j < got.obs.size(); ++j) {
      CHECK(got.obs[j].first == want.obs[j].first);
      // The text field keeps millicycles; half a step either way.
      CHECK(std::abs(got.obs[j].second.phase - want.obs[j].second.phase) <=
            5.0001e-4);
      CHECK(got.obs[j].second.lock_lost == want.obs[j].second.lock_lost);
    }
  }
}

TEST_CASE("inertial csv round trip is exact") {
  auto cfg = round_trip_config();
  cfg.duration_s = 2.0;
  const auto gen = synth::generate_scenario(cfg, 8);

  std::ostringstream os;
  synth::write_imu_csv(os, gen.imu);
  std::istringstream in(os.str());
  const auto parsed = ingest::parse_imu_csv(in);

  REQUIRE(parsed.size() == gen.imu.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(parsed[i].t == gen.imu[i].t);
    CHECK((parsed[i].specific_force.array() ==
           gen.imu[i].specific_force.array()).all());
    CHECK((parsed[i].angular_rate.array() ==
           gen.imu[i].angular_rate.array()).all());
    REQUIRE(parsed[i].magnetic.has_value() == gen.imu[i].magnetic.has_value());
    if (parsed[i].magnetic) {
      CHECK((parsed[i].magnetic->array() == gen.imu[i].magnetic->array()).all());
    }
  }
}

TEST_CASE("inertial csv accepts empty magnetometer rows") {
  const std::string text =
      "t_s,ax,ay,az,gx,gy,gz,mx,my,mz\n"
      "0,0.1,0.2,9.8,0.001,0.002,0.003,0,15.4,-49.5\n"
      "0.01,0.1,0.2,9.8,0.001,0.002,0.003,,,\n";
  std::istringstream in(text);
  const auto parsed = ingest::parse_imu_csv(in);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].magnetic.has_value());
  CHECK_FALSE(parsed[1].magnetic.has_value());
}

TEST_CASE("inertial csv rejects schema and value problems") {
  const auto feed = [](const std::string& text) {
    std::istringstream in(text);
    return ingest::parse_imu_csv(in);
  };
  const std::string head = "t_s,ax,ay,az,gx,gy,gz,mx,my,mz\n";

  CHECK_THROWS_AS(feed(""), SchemaMismatch);
  CHECK_THROWS_AS(feed("time,ax\n"), SchemaMismatch);
  CHECK_THROWS_AS(feed(head + "0,1,2,3,4,5\n"), SchemaMismatch);
  CHECK_THROWS_AS(feed(head + "0,a,2,3,4,5,6,,,\n"), MalformedEpoch);
  CHECK_THROWS_AS(feed(head + "0,nan,2,3,4,5,6,,,\n"), MalformedEpoch);
  CHECK_THROWS_AS(feed(head + "0,1,2,3,4,5,6,7,,\n"), MalformedEpoch);
  CHECK_THROWS_AS(
      feed(head + "0,1,2,3,4,5,6,,,\n0,1,2,3,4,5,6,,,\n"), NonMonotonicTime);
  try {
    feed(head + "0,1,2,3,4,5,6,,,\n0.01,1,2,3,4,5,6,,,\n0.005,1,2,3,4,5,6,,,\n");
    FAIL("expected NonMonotonicTime");
  } catch (const NonMonotonicTime& e) {
    CHECK(e.line == 4);
  }
}

TEST_CASE("satellite csv round trip preserves the table") {
  auto cfg = round_trip_config();
  const auto gen = synth::generate_scenario(cfg, 21);

  std::ostringstream os;
  synth::write_sat_csv(os, gen.sat_table);
  std::istringstream in(os.str());
  const auto parsed = ingest::parse_sat_csv(in);

  const auto a = gen.sat_table.knots();
  const auto b = parsed.knots();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::get<0>(a[i]) == std::get<0>(b[i]));
    CHECK(std::get<1>(a[i]) == std::get<1>(b[i]));
    CHECK(std::get<2>(a[i]).x == std::get<2>(b[i]).x);
    CHECK(std::get<2>(a[i]).y == std::get<2>(b[i]).y);
    CHECK(std::get<2>(a[i]).z == std::get<2>(b[i]).z);
  }
}

TEST_CASE("satellite csv rejects rows off the orbit shell") {
  const auto feed = [](const std::string& text) {
    std::istringstream in(text);
    return ingest::parse_sat_csv(in);
  };
  const std::string head = "t_s,sat,x_m,y_m,z_m\n";

  CHECK_THROWS_AS(feed(""), SchemaMismatch);
  CHECK_THROWS_AS(feed("t,sat,x,y,z\n"), SchemaMismatch);
  CHECK_THROWS_AS(feed(head + "0,G01,26560000,0\n"), SchemaMismatch);
  CHECK_THROWS_AS(feed(head + "0,G01,x,0,0\n"), MalformedEpoch);
  CHECK_THROWS_AS(feed(head + "0,SAT,26560000,0,0\n"), MalformedEpoch);
  // Low orbit, high orbit, and the boundary itself are all outside.
  CHECK_THROWS_AS(feed(head + "0,G01,7000000,0,0\n"), MalformedEpoch);
  CHECK_THROWS_AS(feed(head + "0,G01,42164000,0,0\n"), MalformedEpoch);
  CHECK_THROWS_AS(feed(head + "0,G01,20000000,0,0\n"), MalformedEpoch);
  CHECK_NOTHROW(feed(head + "0,G01,26560000,0,0\n"));
  try {
    feed(head + "0,G01,26560000,0,0\n1,G01,26560000,0,0\n1,G01,26560001,0,0\n");
    FAIL("expected NonMonotonicTime");
  } catch (const NonMonotonicTime& e) {
    CHECK(e.line == 4);
  }
}

TEST_CASE("truth csv round trips and rejects junk") {
  std::ostringstream os;
  synth::write_truth_csv(os, {{0.0, false}, {0.5, true}, {1.0, false}});
  std::istringstream in(os.str());
  const auto parsed = ingest::parse_truth_csv(in);
  REQUIRE(parsed.size() == 3);
  CHECK(parsed[0] == std::pair<double, bool>{0.0, false});
  CHECK(parsed[1] == std::pair<double, bool>{0.5, true});
  CHECK(parsed[2] == std::pair<double, bool>{1.0, false});

  const auto feed = [](const std::string& text) {
    std::istringstream in2(text);
    return ingest::parse_truth_csv(in2);
  };
  CHECK_THROWS_AS(feed(""), SchemaMismatch);
  CHECK_THROWS_AS(feed("time,verdict\n"), SchemaMismatch);
  CHECK_THROWS_AS(feed("t_s,label\n0\n"), SchemaMismatch);
  CHECK_THROWS_AS(feed("t_s,label\nx,benign\n"), MalformedEpoch);
  CHECK_THROWS_AS(feed("t_s,label\n0,maybe\n"), MalformedEpoch);
}

TEST_CASE("stream alignment shifts the clock and trims epochs") {
  std::vector<carrier::ObservationEpoch> obs(11);
  for (std::size_t i = 0; i < obs.size(); ++i) obs[i].t = static_cast<double>(i);
  std::vector<imu::ImuSample> imu_samples(61);
  for (std::size_t i = 0; i < imu_samples.size(); ++i) {
    imu_samples[i].t = static_cast<double>(i) * 0.1;  // spans [0, 6]
  }

  const auto aligned = ingest::align_streams(obs, imu_samples, 2.0);
  CHECK(aligned.imu_time_offset == 2.0);
  CHECK(aligned.imu.front().t == 2.0);
  CHECK(aligned.imu.back().t == 8.0);
  // Epochs 2..8 survive, boundaries included.
  REQUIRE(aligned.observations.size() == 7);
  CHECK(aligned.observations.front().t == 2.0);
  CHECK(aligned.observations.back().t == 8.0);

  CHECK_THROWS_AS(ingest::align_streams(obs, {}, 0.0), NoOverlap);
  CHECK_THROWS_AS(ingest::align_streams(obs, imu_samples, 100.0), NoOverlap);
}

TEST_CASE("mutated inputs never crash the parsers") {
  auto cfg = round_trip_config();
  cfg.duration_s = 1.0;
  const auto gen = synth::generate_scenario(cfg, 5);

  std::ostringstream obs_os, imu_os, sat_os, truth_os;
  synth::write_rinex_obs(obs_os, gen.observations, cfg.receiver);
  synth::write_imu_csv(imu_os, gen.imu);
  synth::write_sat_csv(sat_os, gen.sat_table);
  synth::write_truth_csv(truth_os, gen.truth);
  const std::string bases[] = {obs_os.str(), imu_os.str(), sat_os.str(),
                               truth_os.str()};

  std::mt19937_64 rng(20240822);
  long survived = 0;
  for (int iter = 0; iter < 10000; ++iter) {
    std::string text = bases[static_cast<std::size_t>(iter) % 4];
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      if (text.empty()) break;
      const auto pos = rng() % text.size();
      switch (rng() % 4) {
        case 0: text[pos] = static_cast<char>(rng() % 256); break;
        case 1: text.erase(pos, 1); break;
        case 2: text.insert(pos, 1, static_cast<char>(rng() % 256)); break;
        case 3: text.resize(pos); break;
      }
    }
    try {
      std::istringstream in(text);
      switch (iter % 4) {
        case 0: ingest::parse_rinex_obs(in); break;
        case 1: ingest::parse_imu_csv(in); break;
        case 2: ingest::parse_sat_csv(in); break;
        case 3: ingest::parse_truth_csv(in); break;
      }
      ++survived;
    } catch (const Error&) {
      // Structured rejection is the expected failure mode.
    }
  }
  // Some mutants still parse (e.g. edits inside a comment-free value), and
  // that is fine; the assertion is that we got here without a crash.
  CHECK(survived >= 0);
}

}  // TEST_SUITE
