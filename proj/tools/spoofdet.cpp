// Command-line front end: detect (phase + inertial -> verdict stream),
// simulate (scenario -> synthetic input bundle), allan (stability profile
// of one inertial axis).

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "spoofdet/detector.hpp"
#include "spoofdet/errors.hpp"
#include "spoofdet/ingest.hpp"
#include "spoofdet/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw spoofdet::ParseError("cannot open " + path, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw spoofdet::ParseError("cannot open " + path, 0);
    return in;
}

// All outputs are written to a temporary sibling and renamed into place,
// so readers never observe a half-written file.
void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw spoofdet::ConfigError("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out) throw spoofdet::ConfigError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw spoofdet::ConfigError("cannot move " + tmp + " to " + path +
                                    ": " + ec.message());
    }
}

struct DetectArgs {
    std::string obs, imu, sats, config, out;
    int threads = 0;
    // optional overrides; presence tracked through the CLI11 option objects
    int window_len = 0, stride = 0, min_channels = 0, burn_in = 0;
    double acc_threshold = 0.0, hp_cutoff = 0.0, elevation_mask = 0.0;
    double sigma_floor = 0.0, imu_time_offset = 0.0;
    std::vector<double> receiver;
};

int run_detect(const DetectArgs& a, const CLI::App& cmd) {
    spoofdet::detect::RunConfig cfg;
    try {
        if (!a.config.empty()) {
            cfg = spoofdet::detect::parse_run_config(slurp(a.config));
        }
    } catch (const spoofdet::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spoofdet::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    const auto passed = [&](const std::string& name) {
        return cmd.count(name) > 0;
    };
    if (passed("--window-len")) cfg.window_len = a.window_len;
    if (passed("--stride")) cfg.stride = a.stride;
    if (passed("--min-channels")) cfg.min_channels = a.min_channels;
    if (passed("--burn-in")) cfg.burn_in = a.burn_in;
    if (passed("--acc-threshold")) cfg.acc_threshold = a.acc_threshold;
    if (passed("--hp-cutoff")) cfg.hp_cutoff = a.hp_cutoff;
    if (passed("--elevation-mask")) cfg.elevation_mask_deg = a.elevation_mask;
    if (passed("--sigma-floor")) cfg.sigma_floor = a.sigma_floor;
    if (passed("--imu-time-offset")) cfg.imu_time_offset = a.imu_time_offset;
    if (passed("--receiver")) {
        cfg.receiver = spoofdet::geo::EcefPosition{a.receiver[0], a.receiver[1],
                                                   a.receiver[2]};
    }
    if (a.threads > 0) cfg.threads = a.threads;

    try {
        auto obs_in = open_input(a.obs);
        const spoofdet::ingest::RinexObsFile rinex =
            spoofdet::ingest::parse_rinex_obs(obs_in);
        auto imu_in = open_input(a.imu);
        const std::vector<spoofdet::imu::ImuSample> imu_samples =
            spoofdet::ingest::parse_imu_csv(imu_in);
        auto sat_in = open_input(a.sats);
        const spoofdet::geo::SatPositionTable sats =
            spoofdet::ingest::parse_sat_csv(sat_in);

        if (!cfg.receiver && rinex.approx_position) {
            cfg.receiver = rinex.approx_position;
        }

        const spoofdet::detect::RunResult result = spoofdet::detect::run_detection(
            rinex.epochs, imu_samples, sats, cfg);

        std::string jsonl;
        for (const spoofdet::detect::Verdict& v : result.verdicts) {
            jsonl += spoofdet::detect::verdict_jsonl(v);
            jsonl += '\n';
        }
        atomic_write(a.out, jsonl);
        std::cout << spoofdet::detect::summary_text(result.summary) << "\n";
        return kExitOk;
    } catch (const spoofdet::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spoofdet::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const spoofdet::NoOverlap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const spoofdet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int run_simulate(const std::string& scenario_path, std::uint64_t seed,
                 const std::string& out_dir) {
    std::string text;
    try {
        text = slurp(scenario_path);
    } catch (const spoofdet::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        const spoofdet::synth::ScenarioConfig cfg =
            spoofdet::synth::parse_scenario(text);
        const spoofdet::synth::GeneratedScenario gen =
            spoofdet::synth::generate_scenario(cfg, seed);

        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) {
            throw spoofdet::ConfigError("cannot create " + out_dir + ": " +
                                        ec.message());
        }
        const auto emit = [&](const std::string& name, auto&& writer) {
            std::ostringstream ss;
            writer(ss);
            atomic_write(out_dir + "/" + name, ss.str());
        };
        emit("obs.rnx", [&](std::ostream& os) {
            spoofdet::synth::write_rinex_obs(os, gen.observations, gen.receiver);
        });
        emit("imu.csv", [&](std::ostream& os) {
            spoofdet::synth::write_imu_csv(os, gen.imu);
        });
        emit("sats.csv", [&](std::ostream& os) {
            spoofdet::synth::write_sat_csv(os, gen.sat_table);
        });
        emit("truth.csv", [&](std::ostream& os) {
            spoofdet::synth::write_truth_csv(os, gen.truth);
        });
        return kExitOk;
    } catch (const spoofdet::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const spoofdet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int run_allan(const std::string& imu_path, const std::string& axis,
              const std::string& out_path) {
    static const std::vector<std::string> kAxes = {"ax", "ay", "az", "gx",
                                                   "gy", "gz", "mx", "my", "mz"};
    const auto axis_it = std::find(kAxes.begin(), kAxes.end(), axis);
    if (axis_it == kAxes.end()) {
        std::cerr << "error: unknown axis '" << axis << "'\n";
        return kExitConfig;
    }
    const auto idx = static_cast<std::size_t>(axis_it - kAxes.begin());

    try {
        auto in = open_input(imu_path);
        const std::vector<spoofdet::imu::ImuSample> samples =
            spoofdet::ingest::parse_imu_csv(in);
        if (samples.size() < 2) {
            throw spoofdet::InsufficientData("need at least two samples");
        }
        std::vector<double> y;
        y.reserve(samples.size());
        for (const spoofdet::imu::ImuSample& s : samples) {
            double v = 0.0;
            if (idx < 3) {
                v = s.specific_force[static_cast<Eigen::Index>(idx)];
            } else if (idx < 6) {
                v = s.angular_rate[static_cast<Eigen::Index>(idx - 3)];
            } else {
                if (!s.magnetic) {
                    throw spoofdet::InsufficientData(
                        "magnetometer axis requested but stream has no field data");
                }
                v = (*s.magnetic)[static_cast<Eigen::Index>(idx - 6)];
            }
            y.push_back(v);
        }
        const double dt = (samples.back().t - samples.front().t) /
                          static_cast<double>(samples.size() - 1);

        // Decade-spaced taus from 2 samples up to a ninth of the record.
        std::vector<double> taus;
        const double t_max =
            (samples.back().t - samples.front().t) / 9.0;
        for (double decade = 1e-3; decade <= t_max; decade *= 10.0) {
            for (double mult : {1.0, 2.0, 5.0}) {
                const double tau = decade * mult;
                if (tau >= 2.0 * dt && tau <= t_max) taus.push_back(tau);
            }
        }
        if (taus.empty()) {
            throw spoofdet::InsufficientData("record too short for any tau");
        }
        const auto dev = spoofdet::imu::allan_deviation(y, dt, taus);

        std::string csv = "tau_s,adev\n";
        char buf[64];
        for (const auto& [tau, adev] : dev) {
            std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", tau, adev);
            csv += buf;
        }
        atomic_write(out_path, csv);
        return kExitOk;
    } catch (const spoofdet::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spoofdet::InsufficientData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const spoofdet::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Carrier-phase / inertial consistency spoofing detector"};
    app.require_subcommand(1);

    // detect
    auto* detect = app.add_subcommand(
        "detect", "Run the detector over an observation + inertial bundle");
    DetectArgs da;
    detect->add_option("--obs", da.obs, "RINEX observation file")->required();
    detect->add_option("--imu", da.imu, "Inertial CSV")->required();
    detect->add_option("--sats", da.sats, "Satellite position CSV")->required();
    detect->add_option("--config", da.config, "key=value run configuration");
    detect->add_option("--out", da.out, "Verdict JSONL output path")->required();
    detect->add_option("--threads", da.threads, "Worker threads");
    detect->add_option("--window-len", da.window_len,
                       "Window length N (N+1 epochs)");
    detect->add_option("--stride", da.stride, "Epochs between verdicts");
    detect->add_option("--min-channels", da.min_channels, "Minimum usable channels");
    detect->add_option("--burn-in", da.burn_in, "Epochs skipped at the start");
    detect->add_option("--acc-threshold", da.acc_threshold,
                       "Motion gate, m/s^2 peak L1");
    detect->add_option("--hp-cutoff", da.hp_cutoff, "High-pass cutoff, Hz");
    detect->add_option("--elevation-mask", da.elevation_mask,
                       "Elevation mask, degrees");
    detect->add_option("--sigma-floor", da.sigma_floor, "Phase noise floor, cycles");
    detect->add_option("--imu-time-offset", da.imu_time_offset,
                       "Seconds added to inertial timestamps");
    detect->add_option("--receiver", da.receiver, "Receiver ECEF x y z")
        ->expected(3);

    // simulate
    auto* simulate =
        app.add_subcommand("simulate", "Generate a synthetic scenario bundle");
    std::string scenario, out_dir;
    std::uint64_t seed = 1;
    simulate->add_option("--scenario", scenario, "Scenario description file")
        ->required();
    simulate->add_option("--seed", seed, "Random seed");
    simulate->add_option("--out-dir", out_dir, "Output directory")->required();

    // allan
    auto* allan = app.add_subcommand(
        "allan", "Overlapping Allan deviation of one inertial axis");
    std::string allan_imu, allan_axis, allan_out;
    allan->add_option("--imu", allan_imu, "Inertial CSV")->required();
    allan->add_option("--axis", allan_axis,
                      "Axis: ax ay az gx gy gz mx my mz")->required();
    allan->add_option("--out", allan_out, "tau_s,adev CSV output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (detect->parsed()) return run_detect(da, *detect);
    if (simulate->parsed()) return run_simulate(scenario, seed, out_dir);
    if (allan->parsed()) return run_allan(allan_imu, allan_axis, allan_out);
    return kExitUsage;
}
