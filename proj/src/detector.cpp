#include "spoofdet/detector.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

namespace spoofdet::detect {

QrArtifacts qr_reduce(const carrier::DesignSystem& sys,
                      const carrier::ChannelId& channel,
                      const geo::UnitVector3& los) {
    const Eigen::Index n = sys.design.rows();
    if (sys.design.cols() != 6) throw ParameterError("design must have 6 columns");
    if (n < 8) throw ParameterError("window needs at least 8 epochs");
    if (sys.rhs.size() != n) throw AlignmentError("rhs length mismatch");

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(sys.design);
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(6).triangularView<Eigen::Upper>();
    const Eigen::VectorXd z = qr.householderQ().adjoint() * sys.rhs;

    QrArtifacts out;
    out.channel = channel;
    out.r3 = r.block<3, 3>(3, 3);
    out.z3 = z.segment<3>(3);
    out.residual_tail_energy = z.tail(n - 6).squaredNorm();
    out.los = los;

    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(out.r3);
    out.motion_rank_ok = svd.singularValues()(2) >= 1e-8;
    return out;
}

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return m;
}

Eigen::Matrix3d rodrigues(const Eigen::Vector3d& v) {
    const double angle = v.norm();
    if (angle < 1e-300) return Eigen::Matrix3d::Identity();
    return Eigen::AngleAxisd(angle, v / angle).toRotationMatrix();
}

double objective(std::span<const QrArtifacts> artifacts,
                 const Eigen::Matrix3d& a) {
    double j = 0.0;
    for (const QrArtifacts& art : artifacts) {
        j += (art.r3 * (a * art.los.vec()) - art.z3).squaredNorm();
    }
    return 0.5 * j;
}

// Rotations of the chiral octahedral group: coarse multistart grid when no
// warm start is available.
const std::array<Eigen::Matrix3d, 24>& orientation_grid() {
    static const std::array<Eigen::Matrix3d, 24> grid = [] {
        std::array<Eigen::Matrix3d, 24> g;
        std::size_t n = 0;
        int perm[3] = {0, 1, 2};
        std::sort(perm, perm + 3);
        do {
            for (int sx = -1; sx <= 1; sx += 2) {
                for (int sy = -1; sy <= 1; sy += 2) {
                    for (int sz = -1; sz <= 1; sz += 2) {
                        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
                        m(0, perm[0]) = sx;
                        m(1, perm[1]) = sy;
                        m(2, perm[2]) = sz;
                        if (m.determinant() > 0.5) g[n++] = m;
                    }
                }
            }
        } while (std::next_permutation(perm, perm + 3));
        return g;
    }();
    return grid;
}

struct GnRun {
    Eigen::Matrix3d a;
    double j = 0.0;
    bool converged = false;
    int iterations = 0;
};

GnRun gauss_newton(std::span<const QrArtifacts> artifacts, Eigen::Matrix3d a,
                   double tol, int max_iter) {
    GnRun run;
    double j = objective(artifacts, a);
    bool converged = false;
    int it = 0;
    for (; it < max_iter && !converged; ++it) {
        Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
        Eigen::Vector3d g = Eigen::Vector3d::Zero();
        for (const QrArtifacts& art : artifacts) {
            const Eigen::Vector3d u = a * art.los.vec();
            const Eigen::Matrix3d jac = -art.r3 * skew(u);
            const Eigen::Vector3d res = art.r3 * u - art.z3;
            h += jac.transpose() * jac;
            g += jac.transpose() * res;
        }
        if (g.norm() <= 1e-14 * (1.0 + j)) {
            converged = true;
            break;
        }
        const double ridge = std::max(1e-12 * h.trace(), 1e-300);
        const Eigen::Vector3d full =
            (h + ridge * Eigen::Matrix3d::Identity()).ldlt().solve(-g);

        double step = 1.0;
        bool improved = false;
        for (int halvings = 0; halvings < 30; ++halvings) {
            const Eigen::Matrix3d cand = rodrigues(step * full) * a;
            const double jc = objective(artifacts, cand);
            if (jc < j) {
                const double drop = j - jc;
                a = cand;
                j = jc;
                improved = true;
                if (step * full.norm() < tol) converged = true;
                // Large-residual fits contract only linearly, with ratio
                // approaching one when the model misfits badly; treat a step
                // that no longer moves the objective as stationary too.
                if (drop <= 1e-12 * (j + 1.0)) converged = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) {
            // No descent at machine resolution: stationary.
            converged = true;
        }
    }
    // Snap to an exact rotation; drift over the iterations is O(eps).
    Eigen::Quaterniond q(a);
    q.normalize();
    run.a = q.toRotationMatrix();
    run.j = objective(artifacts, run.a);
    run.converged = converged;
    run.iterations = it;
    return run;
}

// Orthogonal Procrustes warm start: align the lines of sight with the
// per-channel back-solved projections R3^-1 z3 where the triangle is
// invertible.
std::optional<Eigen::Matrix3d> procrustes_start(
    std::span<const QrArtifacts> artifacts) {
    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    int used = 0;
    for (const QrArtifacts& art : artifacts) {
        const Eigen::JacobiSVD<Eigen::Matrix3d> svd(art.r3);
        if (svd.singularValues()(2) < 1e-8 ||
            svd.singularValues()(2) < 1e-6 * svd.singularValues()(0)) {
            continue;
        }
        const Eigen::Vector3d y = art.r3.triangularView<Eigen::Upper>().solve(art.z3);
        const double yn = y.norm();
        if (yn < 1e-9) continue;
        h += art.los.vec() * (y / yn).transpose();
        ++used;
    }
    if (used < 2) return std::nullopt;
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(
        h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d a = svd.matrixV() * svd.matrixU().transpose();
    if (a.determinant() < 0.0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        a = svd.matrixV() * flip * svd.matrixU().transpose();
    }
    return a;
}

}  // namespace

AttitudeFit optimize_attitude(std::span<const QrArtifacts> artifacts,
                              double tol, int max_iter) {
    if (artifacts.size() < 2) {
        throw NotIdentifiable("attitude needs at least two channels");
    }
    double spread = 0.0;
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
        for (std::size_t k = i + 1; k < artifacts.size(); ++k) {
            spread = std::max(spread, artifacts[i].los.vec()
                                          .cross(artifacts[k].los.vec())
                                          .norm());
        }
    }
    if (spread <= 1e-6) {
        throw NotIdentifiable("lines of sight are collinear");
    }

    std::vector<Eigen::Matrix3d> starts;
    if (auto warm = procrustes_start(artifacts)) {
        starts.push_back(*warm);
        starts.push_back(Eigen::Matrix3d::Identity());
    } else {
        const auto& grid = orientation_grid();
        starts.assign(grid.begin(), grid.end());
    }

    // Rank the starts on a small iteration budget, then spend the full
    // budget polishing the winner only: badly misfitting data contracts
    // linearly and would otherwise burn max_iter on every start.
    const int scan_iter = std::min(60, max_iter);
    GnRun best;
    best.j = std::numeric_limits<double>::infinity();
    for (const Eigen::Matrix3d& s : starts) {
        const GnRun run = gauss_newton(artifacts, s, tol, scan_iter);
        if (run.j < best.j) best = run;
    }
    if (!best.converged) {
        const int scanned = best.iterations;
        best = gauss_newton(artifacts, best.a, tol, max_iter - scan_iter);
        best.iterations += scanned;
    }

    AttitudeFit fit;
    fit.rotation = best.a;
    fit.j = best.j;
    fit.converged = best.converged;
    fit.iterations = best.iterations;
    return fit;
}

SpooferFit optimize_spoofer_los(std::span<const QrArtifacts> artifacts) {
    if (artifacts.empty()) {
        throw InsufficientData("shared-direction fit needs at least one channel");
    }
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (const QrArtifacts& art : artifacts) {
        m += art.r3.transpose() * art.r3;
        c += art.r3.transpose() * art.z3;
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
    const Eigen::Vector3d lam = eig.eigenvalues();  // ascending
    const Eigen::Matrix3d q = eig.eigenvectors();
    const Eigen::Vector3d ch = q.transpose() * c;

    const double scale = std::max({lam(2), c.norm(), 1e-300});
    const double tiny = 1e-12 * scale;

    // Split the spectrum at the smallest eigenvalue.
    const auto in_kernel = [&](int i) { return lam(i) - lam(0) <= tiny; };

    // norm^2 of the stationary solution restricted to the non-kernel part
    // at the boundary multiplier mu = -lam(0)
    double boundary_norm_sq = 0.0;
    double kernel_weight = 0.0;
    bool kernel_forced = false;  // kernel component of c is non-negligible
    for (int i = 0; i < 3; ++i) {
        if (in_kernel(i)) {
            kernel_weight += ch(i);
            if (std::abs(ch(i)) > tiny) kernel_forced = true;
        } else {
            const double d = ch(i) / (lam(i) - lam(0));
            boundary_norm_sq += d * d;
        }
    }

    Eigen::Vector3d r;
    if (!kernel_forced && boundary_norm_sq <= 1.0) {
        // Degenerate case: the interior part cannot reach the sphere, so
        // the remainder goes into the flat kernel direction.
        r = Eigen::Vector3d::Zero();
        for (int i = 0; i < 3; ++i) {
            if (!in_kernel(i)) r += ch(i) / (lam(i) - lam(0)) * q.col(i);
        }
        const double tau = std::sqrt(std::max(0.0, 1.0 - boundary_norm_sq));
        const double sign = kernel_weight >= 0.0 ? 1.0 : -1.0;
        r += sign * tau * q.col(0);
    } else {
        const auto norm_sq_at = [&](double mu) {
            double s = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double d = ch(i) / (lam(i) + mu);
                s += d * d;
            }
            return s;
        };
        // Bracket the secular root mu in (-lam(0), inf): at hi the norm is
        // <= 1, walking toward the pole makes it blow up.
        const double cn = std::max(c.norm(), 1e-30);
        double hi = -lam(0) + cn;
        double lo = hi;
        double width = cn;
        while (norm_sq_at(lo) < 1.0 && width > 1e-300) {
            width *= 0.5;
            lo = -lam(0) + width;
        }
        for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (norm_sq_at(mid) >= 1.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        r = Eigen::Vector3d::Zero();
        for (int i = 0; i < 3; ++i) r += ch(i) / (lam(i) + lo) * q.col(i);
        r.normalize();
    }

    SpooferFit fit{geo::UnitVector3::normalized(r), 0.0};
    double j = 0.0;
    for (const QrArtifacts& art : artifacts) {
        j += (art.r3 * fit.direction.vec() - art.z3).squaredNorm();
    }
    fit.j = 0.5 * j;
    return fit;
}

Decision decide(double j_sp, double j_nonsp) {
    Decision d;
    d.gamma = j_sp - j_nonsp;
    if (d.gamma > 0.0) {
        d.classification = Classification::NonSpoofing;
    } else if (d.gamma < 0.0) {
        d.classification = Classification::Spoofing;
    } else {
        d.classification = Classification::Undefined;
    }
    return d;
}

void RunConfig::validate() const {
    if (window_len < 7) throw ConfigError("window_len must be at least 7");
    if (stride < 1) throw ConfigError("stride must be positive");
    if (!(acc_threshold > 0.0)) throw ConfigError("acc_threshold must be positive");
    if (!(hp_cutoff > 0.0)) throw ConfigError("hp_cutoff must be positive");
    if (min_channels < 2) throw ConfigError("min_channels must be at least 2");
    if (elevation_mask_deg < 0.0 || elevation_mask_deg >= 90.0) {
        throw ConfigError("elevation_mask_deg must lie in [0, 90)");
    }
    if (!(sigma_floor > 0.0)) throw ConfigError("sigma_floor must be positive");
    if (burn_in < 0) throw ConfigError("burn_in must be non-negative");
    if (!(slip_threshold > 0.0)) throw ConfigError("slip_threshold must be positive");
    if (!(attitude_gain > 0.0)) throw ConfigError("attitude_gain must be positive");
    if (attitude_init_window < 0.0) throw ConfigError("attitude_init_window must be non-negative");
    if (threads < 1) throw ConfigError("threads must be at least 1");
}

RunConfig parse_run_config(const std::string& text) {
    RunConfig cfg;
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
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "window_len") cfg.window_len = std::stoi(val);
            else if (key == "stride") cfg.stride = std::stoi(val);
            else if (key == "acc_threshold") cfg.acc_threshold = std::stod(val);
            else if (key == "hp_cutoff") cfg.hp_cutoff = std::stod(val);
            else if (key == "min_channels") cfg.min_channels = std::stoi(val);
            else if (key == "elevation_mask_deg") cfg.elevation_mask_deg = std::stod(val);
            else if (key == "sigma_floor") cfg.sigma_floor = std::stod(val);
            else if (key == "imu_time_offset") cfg.imu_time_offset = std::stod(val);
            else if (key == "burn_in") cfg.burn_in = std::stoi(val);
            else if (key == "slip_threshold") cfg.slip_threshold = std::stod(val);
            else if (key == "attitude_gain") cfg.attitude_gain = std::stod(val);
            else if (key == "attitude_init_window") cfg.attitude_init_window = std::stod(val);
            else if (key == "threads") cfg.threads = std::stoi(val);
            else if (key == "receiver") {
                std::istringstream vs(val);
                std::string part;
                double xyz[3];
                for (double& coord : xyz) {
                    if (!std::getline(vs, part, ',')) {
                        throw ConfigError("receiver needs x,y,z");
                    }
                    coord = std::stod(part);
                }
                cfg.receiver = geo::EcefPosition{xyz[0], xyz[1], xyz[2]};
            } else {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": bad value for '" + key + "'");
        } catch (const std::out_of_range&) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": value out of range for '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

namespace {

struct WindowTask {
    std::size_t end_epoch;
    double t;
};

Verdict evaluate_window(const WindowTask& task,
                        std::span<const carrier::ChannelSeries> channels,
                        const std::vector<double>& epoch_t,
                        double nominal_dt,
                        const imu::DisplacementSeries& disp,
                        const geo::SatPositionTable& sats,
                        const RunConfig& cfg) {
    const std::size_t n_epochs = static_cast<std::size_t>(cfg.window_len) + 1;
    const double t_begin = epoch_t[task.end_epoch - cfg.window_len];

    Verdict v;
    v.t = task.t;

    // Acceleration gate over the window span.
    const auto i0 = static_cast<std::size_t>(
        std::lower_bound(disp.t.begin(), disp.t.end(), t_begin - 1e-9) -
        disp.t.begin());
    const auto i1 = static_cast<std::size_t>(
        std::upper_bound(disp.t.begin(), disp.t.end(), task.t + 1e-9) -
        disp.t.begin());
    if (i1 <= i0) return v;
    const std::size_t n_acc = i1 - i0;
    v.max_l1_acc = imu::max_l1_acceleration({disp.ax.data() + i0, n_acc},
                                            {disp.ay.data() + i0, n_acc},
                                            {disp.az.data() + i0, n_acc});
    if (v.max_l1_acc < cfg.acc_threshold) return v;

    std::vector<QrArtifacts> artifacts;
    artifacts.reserve(channels.size());
    for (const carrier::ChannelSeries& ch : channels) {
        geo::EcefPosition sat_pos{};
        try {
            sat_pos = sats.interpolate(ch.id.sat(), t_begin);
        } catch (const UnknownSatellite&) {
            continue;
        } catch (const OutOfRange&) {
            continue;
        }
        if (geo::elevation_deg(*cfg.receiver, sat_pos) < cfg.elevation_mask_deg) {
            continue;
        }
        const geo::UnitVector3 los = geo::los_unit_vector(*cfg.receiver, sat_pos);
        const carrier::WindowResult wr = carrier::extract_window(
            ch, task.end_epoch, n_epochs, nominal_dt, disp, los,
            cfg.slip_threshold, cfg.sigma_floor);
        if (wr.status != carrier::WindowStatus::Ok) continue;
        artifacts.push_back(
            qr_reduce(carrier::build_design_matrix(*wr.window), ch.id, los));
    }

    v.n_channels = static_cast<int>(artifacts.size());
    if (!artifacts.empty()) {
        v.motion_rank_ok =
            std::all_of(artifacts.begin(), artifacts.end(),
                        [](const QrArtifacts& a) { return a.motion_rank_ok; });
    }
    if (v.n_channels < cfg.min_channels) return v;

    AttitudeFit att;
    try {
        att = optimize_attitude(artifacts);
    } catch (const NotIdentifiable&) {
        return v;
    }
    if (!att.converged) return v;
    const SpooferFit sp = optimize_spoofer_los(artifacts);

    const Decision d = decide(sp.j, att.j);
    v.have_test = true;
    v.gamma = d.gamma;
    v.j_sp = sp.j;
    v.j_nonsp = att.j;
    v.classification = d.classification;
    return v;
}

}  // namespace

RunResult run_detection(std::span<const carrier::ObservationEpoch> obs,
                        std::span<const imu::ImuSample> imu_samples,
                        const geo::SatPositionTable& sats,
                        const RunConfig& cfg) {
    cfg.validate();
    if (!cfg.receiver) throw ConfigError("receiver position is required");
    if (obs.empty()) throw InsufficientData("no observation epochs");
    if (imu_samples.empty()) throw NoOverlap("no inertial samples");

    std::vector<imu::ImuSample> shifted(imu_samples.begin(), imu_samples.end());
    for (imu::ImuSample& s : shifted) s.t += cfg.imu_time_offset;

    // Keep only epochs the inertial stream can cover.
    const double span_lo = shifted.front().t - 1e-9;
    const double span_hi = shifted.back().t + 1e-9;
    const auto first = std::lower_bound(
        obs.begin(), obs.end(), span_lo,
        [](const carrier::ObservationEpoch& e, double t) { return e.t < t; });
    auto last = first;
    while (last != obs.end() && last->t <= span_hi) ++last;
    obs = obs.subspan(static_cast<std::size_t>(first - obs.begin()),
                      static_cast<std::size_t>(last - first));
    if (obs.empty()) {
        throw NoOverlap("observation epochs and inertial stream do not overlap");
    }

    const std::vector<imu::Attitude> attitudes = imu::estimate_attitude(
        shifted, cfg.attitude_gain, cfg.attitude_init_window);
    const imu::Vec3Series a_lin = imu::linear_acceleration(shifted, attitudes);
    const imu::DisplacementSeries disp =
        imu::integrate_displacement(a_lin, cfg.hp_cutoff);

    const std::vector<carrier::ChannelSeries> channels = carrier::channelize(obs);

    std::vector<double> epoch_t(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) epoch_t[i] = obs[i].t;
    std::vector<double> dts;
    dts.reserve(epoch_t.size());
    for (std::size_t i = 1; i < epoch_t.size(); ++i) {
        dts.push_back(epoch_t[i] - epoch_t[i - 1]);
    }
    if (dts.empty()) throw InsufficientData("need at least two epochs");
    std::nth_element(dts.begin(), dts.begin() + static_cast<std::ptrdiff_t>(dts.size() / 2), dts.end());
    const double nominal_dt = dts[dts.size() / 2];

    std::vector<WindowTask> tasks;
    for (std::size_t k = static_cast<std::size_t>(cfg.burn_in + cfg.window_len);
         k < obs.size(); k += static_cast<std::size_t>(cfg.stride)) {
        tasks.push_back({k, epoch_t[k]});
    }

    RunResult out;
    out.verdicts.resize(tasks.size());

    const auto worker = [&](std::size_t tid, std::size_t n_threads,
                            std::exception_ptr& err) {
        try {
            for (std::size_t i = tid; i < tasks.size(); i += n_threads) {
                out.verdicts[i] = evaluate_window(tasks[i], channels, epoch_t,
                                                  nominal_dt, disp, sats, cfg);
            }
        } catch (...) {
            err = std::current_exception();
        }
    };

    if (cfg.threads <= 1) {
        std::exception_ptr err;
        worker(0, 1, err);
        if (err) std::rethrow_exception(err);
    } else {
        const auto n_threads = static_cast<std::size_t>(cfg.threads);
        std::vector<std::exception_ptr> errs(n_threads);
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t tid = 0; tid < n_threads; ++tid) {
            pool.emplace_back(worker, tid, n_threads, std::ref(errs[tid]));
        }
        for (std::thread& th : pool) th.join();
        for (const std::exception_ptr& err : errs) {
            if (err) std::rethrow_exception(err);
        }
    }

    for (const Verdict& v : out.verdicts) {
        ++out.summary.events;
        switch (v.classification) {
            case Classification::Spoofing: ++out.summary.spoofing; break;
            case Classification::NonSpoofing: ++out.summary.non_spoofing; break;
            case Classification::Undefined: ++out.summary.undefined; break;
        }
    }
    return out;
}

namespace {

std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

}  // namespace

std::string verdict_jsonl(const Verdict& v) {
    std::string s = "{\"t\":" + fmt_double(v.t) + ",\"verdict\":\"";
    switch (v.classification) {
        case Classification::Spoofing: s += "spoofing"; break;
        case Classification::NonSpoofing: s += "non_spoofing"; break;
        case Classification::Undefined: s += "undefined"; break;
    }
    s += "\",\"gamma\":";
    s += v.have_test ? fmt_double(v.gamma) : "null";
    s += ",\"j_sp\":";
    s += v.have_test ? fmt_double(v.j_sp) : "null";
    s += ",\"j_nonsp\":";
    s += v.have_test ? fmt_double(v.j_nonsp) : "null";
    s += ",\"n_channels\":" + std::to_string(v.n_channels);
    s += ",\"max_l1_acc\":" + fmt_double(v.max_l1_acc);
    s += ",\"motion_rank_ok\":";
    if (v.n_channels > 0) {
        s += v.motion_rank_ok ? "true" : "false";
    } else {
        s += "null";
    }
    s += "}";
    return s;
}

std::string summary_text(const RunSummary& s) {
    std::string out = "Events: " + std::to_string(s.events);
    out += "  Undefined: " + std::to_string(s.undefined);
    out += "  Spoofing: " + std::to_string(s.spoofing);
    out += "  Non-Spoofing: " + std::to_string(s.non_spoofing);
    return out;
}

}  // namespace spoofdet::detect
