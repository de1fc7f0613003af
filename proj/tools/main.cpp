// oscbath — reproducible experiment runner for the coupled-oscillator
// equilibration pipeline (verify / evolve / sweep)
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oscbath/cli.hpp"
#include "oscbath/version.hpp"

namespace {

struct CommonFlags {
    std::string config, out, scheme, fit_channel, bath_csv;
    double omega0 = 0, eta = 0, cutoff = 0, beta = 0, t_max = 0, dt = 0;
    double fit_lo = 0, fit_hi = 0, equil_tol = 0;
    long n_modes = 0;
    bool free_run = false;
};

void add_common(CLI::App* sub, CommonFlags& f, bool with_bath_csv) {
    sub->add_option("--config", f.config, "JSON config file (flags override file values)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--omega0", f.omega0, "subsystem frequency");
    sub->add_option("--eta", f.eta, "ohmic friction coefficient");
    sub->add_option("--cutoff", f.cutoff, "bath cutoff frequency");
    sub->add_option("--beta", f.beta, "reciprocal temperature");
    sub->add_option("--n-modes", f.n_modes, "number of bath modes");
    sub->add_option("--scheme", f.scheme, "discretization scheme: midpoint | gauss");
    sub->add_option("--t-max", f.t_max, "trajectory end time");
    sub->add_option("--dt", f.dt, "trajectory time step");
    sub->add_option("--fit-lo", f.fit_lo, "decay-fit window start");
    sub->add_option("--fit-hi", f.fit_hi, "decay-fit window end");
    sub->add_option("--fit-channel", f.fit_channel, "decay-fit channel: p2 | q2");
    sub->add_option("--equil-tol", f.equil_tol, "equilibration relative tolerance");
    sub->add_flag("--free-run", f.free_run, "uncoupled control experiment (requires eta = 0)");
    if (with_bath_csv)
        sub->add_option("--bath-csv", f.bath_csv, "load the bath from CSV instead of discretizing")
            ->check(CLI::ExistingFile);
}

oscbath::cli::RunConfig build_config(const CLI::App* sub, const CommonFlags& f) {
    oscbath::cli::RunConfig cfg;
    if (sub->count("--config") > 0) cfg = oscbath::cli::config_from_json_file(f.config);
    if (sub->count("--out") > 0) cfg.output_dir = f.out;
    if (sub->count("--omega0") > 0) cfg.omega0 = f.omega0;
    if (sub->count("--eta") > 0) cfg.eta = f.eta;
    if (sub->count("--cutoff") > 0) cfg.cutoff = f.cutoff;
    if (sub->count("--beta") > 0) cfg.beta = f.beta;
    if (sub->count("--n-modes") > 0) cfg.n_modes = f.n_modes;
    if (sub->count("--scheme") > 0) cfg.scheme = f.scheme;
    if (sub->count("--t-max") > 0) cfg.t_max = f.t_max;
    if (sub->count("--dt") > 0) cfg.dt = f.dt;
    if (sub->count("--fit-lo") > 0) cfg.fit_lo = f.fit_lo;
    if (sub->count("--fit-hi") > 0) cfg.fit_hi = f.fit_hi;
    if (sub->count("--fit-channel") > 0) cfg.fit_channel = f.fit_channel;
    if (sub->count("--equil-tol") > 0) cfg.equil_rel_tol = f.equil_tol;
    if (sub->count("--free-run") > 0) cfg.free_run = f.free_run;
    if (sub->get_option_no_throw("--bath-csv") && sub->count("--bath-csv") > 0)
        cfg.bath_csv = f.bath_csv;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled-oscillator equilibration experiments"};
    app.set_version_flag("--version", oscbath::kVersion);
    app.require_subcommand(1);

    CommonFlags vf, ef, sf;
    CLI::App* verify = app.add_subcommand("verify", "normal-mode and spectral identity checks");
    add_common(verify, vf, true);
    CLI::App* evolve = app.add_subcommand("evolve", "run the trajectory and write artifacts");
    add_common(evolve, ef, false);
    CLI::App* sweep = app.add_subcommand("sweep", "repeat the pipeline over a parameter list");
    add_common(sweep, sf, false);
    std::string vary;
    std::vector<double> values;
    sweep->add_option("--vary", vary, "parameter to vary: n_modes | eta | beta | cutoff")
        ->required();
    sweep->add_option("--values", values, "list of parameter values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? oscbath::cli::kExitOk : oscbath::cli::kExitValidation;
    }

    try {
        if (verify->parsed()) return oscbath::cli::run_verify(build_config(verify, vf));
        if (evolve->parsed()) return oscbath::cli::run_evolve(build_config(evolve, ef));
        if (sweep->parsed()) return oscbath::cli::run_sweep(build_config(sweep, sf), vary, values);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return oscbath::cli::exit_code_for_current_exception();
    }
    return oscbath::cli::kExitValidation;
}
