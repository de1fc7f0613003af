#include "oscbath/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "oscbath/analysis.hpp"
#include "oscbath/bath.hpp"
#include "oscbath/dynamics.hpp"
#include "oscbath/io.hpp"
#include "oscbath/modes.hpp"
#include "oscbath/spectral.hpp"
#include "oscbath/version.hpp"

namespace oscbath::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kCommGate = 1e-8;

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidParam(std::string("config parse error: ") + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

json nullable(std::optional<double> v) {
    if (v) return json(*v);
    return json(nullptr);
}

struct Pipeline {
    SystemParams sys;
    OhmicSpectrum spec;
    bath::DiscretizedBath bth;
    modes::NormalModes nm;
    dynamics::CovarianceTrajectory traj;
    EquilibriumMoments eq;         // comparison target (continuum, or uncoupled sums)
    EquilibriumMoments finite_sum; // finite-bath spectral sums at beta
    std::optional<EquilibriumMoments> continuum;
    double recurrence_est = std::numeric_limits<double>::infinity();
    double comm_dev = 0.0;
    std::optional<analysis::DecayFit> fit;
    std::string fit_skipped; // non-empty when no fit was produced
    std::optional<double> equil_time;
    std::optional<double> recurrence_detected;
};

Eigen::VectorXd make_grid(double t_max, double dt) {
    const auto nt = static_cast<Eigen::Index>(std::floor(t_max / dt + 1e-9)) + 1;
    Eigen::VectorXd t(nt);
    for (Eigen::Index i = 0; i < nt; ++i) t[i] = static_cast<double>(i) * dt;
    return t;
}

analysis::Channel channel_of(const std::string& name) {
    return name == "q2" ? analysis::Channel::Q2 : analysis::Channel::P2;
}

// Fits the envelope rate, shrinking the window from above when the
// residuals hit the numerical floor inside it.
void fit_with_clipping(const RunConfig& cfg, Pipeline& p) {
    const analysis::Channel ch = channel_of(cfg.fit_channel);
    const double t_end = p.traj.times[p.traj.times.size() - 1];
    double lo = cfg.fit_lo >= 0.0 ? cfg.fit_lo : 2.0 / cfg.eta;
    double hi = cfg.fit_hi >= 0.0 ? cfg.fit_hi : std::min(cfg.t_max, 0.5 * p.recurrence_est);
    hi = std::min(hi, t_end);
    if (!(lo < hi) || lo >= t_end) {
        p.fit_skipped = "fit window empty for this grid";
        return;
    }

    const double floor = ch == analysis::Channel::P2 ? std::abs(p.finite_sum.p2 - p.eq.p2)
                                                     : std::abs(p.finite_sum.q2 - p.eq.q2);
    for (int attempt = 0; attempt < 16; ++attempt) {
        try {
            p.fit = analysis::fit_decay_rate(p.traj, p.eq, ch, {lo, hi}, p.sys, p.spec, floor);
            return;
        } catch (const UnderflowError&) {
            hi = lo + 0.85 * (hi - lo); // floor-dominated tail: shrink from above
            if (hi - lo < 6.0 / p.sys.omega0) {
                p.fit_skipped = "residuals at the numerical floor throughout the window";
                return;
            }
        } catch (const WindowError& e) {
            p.fit_skipped = e.what();
            return;
        } catch (const OverdampedError& e) {
            p.fit_skipped = e.what();
            return;
        }
    }
    p.fit_skipped = "window clipping did not converge";
}

Pipeline run_pipeline(const RunConfig& cfg) {
    Pipeline p;
    p.sys = {cfg.omega0, cfg.beta};
    p.spec = {cfg.eta, cfg.cutoff};

    p.bth = cfg.free_run
                ? bath::uncoupled(cfg.cutoff, cfg.n_modes)
                : bath::discretize(p.spec, cfg.n_modes,
                                   cfg.scheme == "gauss" ? bath::Scheme::Gauss
                                                         : bath::Scheme::Midpoint);

    const modes::SecularRoots roots = modes::solve_modes(p.sys, p.bth);
    p.nm = modes::mode_matrix(p.sys, p.bth, roots);
    const dynamics::ThermalOccupations occ = dynamics::thermal_occupations(p.sys, p.bth);

    if (p.bth.n() >= 2) p.recurrence_est = bath::recurrence_estimate(p.bth);

    dynamics::TrajectoryOptions topt;
    topt.recurrence_horizon = p.recurrence_est;
    p.traj = dynamics::trajectory(p.nm, occ, make_grid(cfg.t_max, cfg.dt), topt);
    p.comm_dev = p.traj.max_comm_deviation();

    p.finite_sum = dynamics::mode_thermal_moments(p.nm, cfg.beta);
    if (cfg.free_run) {
        p.eq = p.finite_sum; // uncoupled thermal values
        p.fit_skipped = "free run: stationary trajectory, nothing to fit";
    } else {
        p.continuum = spectral::equilibrium_moments(p.sys, p.spec);
        p.eq = *p.continuum;
        fit_with_clipping(cfg, p);
    }

    p.equil_time = analysis::equilibration_time(p.traj, p.eq, cfg.equil_rel_tol);
    p.recurrence_detected = analysis::detect_recurrence(p.traj, p.eq);
    return p;
}

json params_echo(const RunConfig& cfg) {
    json j;
    j["omega0"] = cfg.omega0;
    j["eta"] = cfg.eta;
    j["cutoff"] = cfg.cutoff;
    j["beta"] = cfg.beta;
    j["n_modes"] = cfg.n_modes;
    j["scheme"] = cfg.scheme;
    j["t_max"] = cfg.t_max;
    j["dt"] = cfg.dt;
    j["fit_channel"] = cfg.fit_channel;
    j["fit_lo"] = cfg.fit_lo;
    j["fit_hi"] = cfg.fit_hi;
    j["equil_rel_tol"] = cfg.equil_rel_tol;
    j["free_run"] = cfg.free_run;
    return j;
}

} // namespace

RunConfig config_from_json_file(const std::filesystem::path& path) {
    const json j = load_json(path);
    RunConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "omega0") cfg.omega0 = value.get<double>();
            else if (key == "eta") cfg.eta = value.get<double>();
            else if (key == "cutoff") cfg.cutoff = value.get<double>();
            else if (key == "beta") cfg.beta = value.get<double>();
            else if (key == "n_modes") cfg.n_modes = value.get<long>();
            else if (key == "scheme") cfg.scheme = value.get<std::string>();
            else if (key == "t_max") cfg.t_max = value.get<double>();
            else if (key == "dt") cfg.dt = value.get<double>();
            else if (key == "fit_channel") cfg.fit_channel = value.get<std::string>();
            else if (key == "fit_lo") cfg.fit_lo = value.get<double>();
            else if (key == "fit_hi") cfg.fit_hi = value.get<double>();
            else if (key == "equil_rel_tol") cfg.equil_rel_tol = value.get<double>();
            else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
            else if (key == "free_run") cfg.free_run = value.get<bool>();
            else if (key == "bath_csv") cfg.bath_csv = value.get<std::string>();
            else throw InvalidParam("config: unknown key '" + key + "'");
        }
    } catch (const json::type_error& e) {
        throw InvalidParam(std::string("config type error: ") + e.what());
    }
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (!(cfg.omega0 > 0.0)) throw InvalidParam("omega0 must be positive");
    if (!(cfg.cutoff > 0.0)) throw InvalidParam("cutoff must be positive");
    if (!(cfg.beta > 0.0)) throw InvalidParam("beta must be positive");
    if (cfg.n_modes < 1) throw InvalidParam("n_modes must be >= 1");
    if (cfg.scheme != "midpoint" && cfg.scheme != "gauss")
        throw InvalidParam("scheme must be 'midpoint' or 'gauss'");
    if (!(cfg.t_max > 0.0)) throw InvalidParam("t_max must be positive");
    if (!(cfg.dt > 0.0)) throw InvalidParam("dt must be positive");
    if (cfg.fit_channel != "p2" && cfg.fit_channel != "q2")
        throw InvalidParam("fit_channel must be 'p2' or 'q2'");
    if (!(cfg.equil_rel_tol > 0.0)) throw InvalidParam("equil_rel_tol must be positive");
    if (cfg.free_run) {
        if (cfg.eta != 0.0)
            throw InvalidParam("--free-run runs the uncoupled control; set eta = 0");
    } else if (!(cfg.eta > 0.0)) {
        throw InvalidParam("eta must be positive (pass --free-run for the uncoupled control)");
    }
}

int run_verify(const RunConfig& cfg) {
    validate(cfg);
    const SystemParams sys{cfg.omega0, cfg.beta};
    const OhmicSpectrum spec{cfg.eta, cfg.cutoff};

    bath::DiscretizedBath bth;
    if (!cfg.bath_csv.empty())
        bth = io::read_bath_csv(cfg.bath_csv);
    else if (cfg.free_run)
        bth = bath::uncoupled(cfg.cutoff, cfg.n_modes);
    else
        bth = bath::discretize(spec, cfg.n_modes,
                               cfg.scheme == "gauss" ? bath::Scheme::Gauss
                                                     : bath::Scheme::Midpoint);

    const modes::SecularRoots roots = modes::solve_modes(sys, bth);
    const modes::NormalModes nm = modes::mode_matrix(sys, bth, roots);
    const modes::IdentityReport rep = modes::verify_identities(nm, sys, bth);

    // Boundary invariant Im g^{-1}(w - i0+) = -J(w) and Im g >= 0 on (0, cutoff).
    double im_identity = 0.0;
    double im_g_min = 0.0;
    const int n_scan = 2000;
    for (int i = 1; i < n_scan; ++i) {
        const double w = cfg.cutoff * static_cast<double>(i) / n_scan;
        const auto ginv = spectral::g_inverse_continuum(sys, spec, {w, 0.0},
                                                        spectral::BoundarySide::Below);
        im_identity = std::max(im_identity, std::abs(ginv.imag() + spectral::j_value(spec, w)));
        im_g_min = std::min(im_g_min, spectral::im_g_boundary(sys, spec, w));
    }

    const bool identities_ok = rep.pass();
    const bool spectral_ok = im_identity < 1e-12 && im_g_min >= -1e-15;

    std::filesystem::create_directories(cfg.output_dir);
    const std::filesystem::path dir(cfg.output_dir);

    json j;
    j["params"] = params_echo(cfg);
    j["version"] = kVersion;
    j["residuals"] = {{"orthogonality_defect", rep.orthogonality_defect},
                      {"completeness_defect", rep.completeness_defect},
                      {"row_completeness", rep.row_completeness},
                      {"row0_identity", rep.row0_identity},
                      {"trace_residual", rep.trace_residual},
                      {"det_ratio_residual", rep.det_ratio_residual},
                      {"probes", rep.probes},
                      {"im_ginv_plus_j_max", im_identity},
                      {"im_g_min", im_g_min}};
    j["thresholds"] = {{"orthogonality", 1e-8},
                       {"trace", 1e-10},
                       {"det_ratio", 1e-10},
                       {"im_ginv_plus_j", 1e-12}};
    j["checks"] = {{"identities", identities_ok}, {"spectral_boundary", spectral_ok}};
    j["pass"] = identities_ok && spectral_ok;
    write_json(dir / "verify.json", j);
    io::write_bath_csv(dir / "bath.csv", bth);
    io::write_modes_csv(dir / "modes.csv", nm);

    return (identities_ok && spectral_ok) ? kExitOk : kExitNumerical;
}

int run_evolve(const RunConfig& cfg) {
    validate(cfg);
    const Pipeline p = run_pipeline(cfg);

    std::filesystem::create_directories(cfg.output_dir);
    const std::filesystem::path dir(cfg.output_dir);
    io::write_trajectory_csv(dir / "trajectory.csv", p.traj);

    json eqj;
    if (p.continuum)
        eqj["continuum"] = {{"p2", p.continuum->p2}, {"q2", p.continuum->q2}};
    else
        eqj["continuum"] = nullptr;
    eqj["finite_bath"] = {{"p2", p.finite_sum.p2}, {"q2", p.finite_sum.q2}};
    eqj["uncoupled"] = {{"p2", 0.5 * cfg.omega0 * coth(0.5 * cfg.beta * cfg.omega0)},
                        {"q2", coth(0.5 * cfg.beta * cfg.omega0) / (2.0 * cfg.omega0)}};
    write_json(dir / "equilibrium.json", eqj);

    const bool comm_ok = p.comm_dev <= kCommGate;
    json s;
    s["params"] = params_echo(cfg);
    s["version"] = kVersion;
    s["comm_max_deviation"] = p.comm_dev;
    s["comm_gate_passed"] = comm_ok;
    if (p.fit) {
        s["decay_fit"] = {{"channel", cfg.fit_channel},
                          {"rate", p.fit->rate},
                          {"rate_stderr", p.fit->rate_stderr},
                          {"window", {p.fit->window.lo, p.fit->window.hi}},
                          {"n_peaks", p.fit->n_peaks}};
    } else {
        s["decay_fit"] = {{"skipped", p.fit_skipped}};
    }
    s["equilibration"] = {{"rel_tol", cfg.equil_rel_tol}, {"time", nullable(p.equil_time)}};
    s["recurrence"] = {{"estimate", p.recurrence_est},
                       {"detected", nullable(p.recurrence_detected)},
                       {"warning", p.traj.recurrence_warning}};
    s["status"] = comm_ok ? "ok" : "failed";
    write_json(dir / "summary.json", s);

    return comm_ok ? kExitOk : kExitNumerical;
}

int run_sweep(const RunConfig& cfg, const std::string& vary, const std::vector<double>& values) {
    validate(cfg);
    if (vary != "n_modes" && vary != "eta" && vary != "beta" && vary != "cutoff")
        throw InvalidParam("sweep: vary must be one of n_modes, eta, beta, cutoff");
    if (values.empty()) throw InvalidParam("sweep: values list is empty");

    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(std::filesystem::path(cfg.output_dir) / "sweep.csv");
    if (!out) throw IoError("cannot open sweep.csv for writing");
    out << "vary,value,status,p2_eq,q2_eq,p2_fb,q2_fb,eq_resid_p2,eq_resid_q2,"
           "traj_resid_p2,traj_resid_q2,rate,rate_stderr,equil_time,recurrence_estimate,"
           "message\n";

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const double value : values) {
        RunConfig c = cfg;
        std::string status = "ok", message;
        double p2e = nan, q2e = nan, p2f = nan, q2f = nan, erp = nan, erq = nan, trp = nan,
               trq = nan, rate = nan, rerr = nan, teq = nan, rec = nan;
        try {
            if (vary == "n_modes") {
                c.n_modes = static_cast<long>(std::llround(value));
                if (c.n_modes < 1) throw InvalidParam("sweep: n_modes must be >= 1");
            } else if (vary == "eta")
                c.eta = value;
            else if (vary == "beta")
                c.beta = value;
            else
                c.cutoff = value;
            validate(c);

            const Pipeline p = run_pipeline(c);
            p2e = p.eq.p2;
            q2e = p.eq.q2;
            p2f = p.finite_sum.p2;
            q2f = p.finite_sum.q2;
            erp = std::abs(p2f - p2e) / p2e;
            erq = std::abs(q2f - q2e) / q2e;
            const Eigen::Index last = p.traj.times.size() - 1;
            trp = std::abs(p.traj.p2[last] - p2e) / p2e;
            trq = std::abs(p.traj.q2[last] - q2e) / q2e;
            if (p.fit) {
                rate = p.fit->rate;
                rerr = p.fit->rate_stderr;
            } else {
                message = p.fit_skipped;
            }
            if (p.equil_time) teq = *p.equil_time;
            rec = p.recurrence_est;
            if (p.comm_dev > kCommGate) {
                status = "failed";
                message = "comm gate exceeded";
            }
        } catch (const std::exception& e) {
            status = "error";
            message = e.what();
        }
        for (char& ch : message)
            if (ch == ',' || ch == '\n') ch = ';';
        out << vary << ',' << io::format_full(value) << ',' << status << ','
            << io::format_full(p2e) << ',' << io::format_full(q2e) << ','
            << io::format_full(p2f) << ',' << io::format_full(q2f) << ','
            << io::format_full(erp) << ',' << io::format_full(erq) << ','
            << io::format_full(trp) << ',' << io::format_full(trq) << ','
            << io::format_full(rate) << ',' << io::format_full(rerr) << ','
            << io::format_full(teq) << ',' << io::format_full(rec) << ',' << message << '\n';
    }
    if (!out) throw IoError("write failed: sweep.csv");
    return kExitOk;
}

int exit_code_for_current_exception() {
    try {
        throw;
    } catch (const InvalidParam&) {
        return kExitValidation;
    } catch (const GridError&) {
        return kExitValidation;
    } catch (const WindowError&) {
        return kExitValidation;
    } catch (const IndexError&) {
        return kExitValidation;
    } catch (const DomainError&) {
        return kExitValidation;
    } catch (const IoError&) {
        return kExitIo;
    } catch (const std::filesystem::filesystem_error&) {
        return kExitIo;
    } catch (const std::exception&) {
        return kExitNumerical;
    }
}

} // namespace oscbath::cli
