// srbloch: steady-state response, stochastic-resonance sweeps, and NMR
// protocol simulations for a driven dissipative two-level system.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "srbloch/core.hpp"
#include "srbloch/dynamics.hpp"
#include "srbloch/io.hpp"
#include "srbloch/pulse_sim.hpp"
#include "srbloch/sr_analysis.hpp"
#include "srbloch/steady_state.hpp"

namespace {

using namespace srbloch;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 64;

struct ParamFlags {
    std::string t1, t2, t12;
    double rabi_hz = 0.0;
    double larmor_hz = 400e6;
    double drive_hz = -1.0;  // default: on resonance
    double seq = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--t1", t1, "longitudinal relaxation time (e.g. 36.5ms)");
        cmd->add_option("--t2", t2, "transverse relaxation time");
        cmd->add_option("--t12", t12, "common relaxation time T1=T2");
        cmd->add_option("--rabi-hz", rabi_hz, "Rabi frequency omega1/2pi in Hz");
        cmd->add_option("--larmor-hz", larmor_hz, "Larmor frequency omega0/2pi in Hz");
        cmd->add_option("--drive-hz", drive_hz, "drive frequency Omega/2pi in Hz");
        cmd->add_option("--seq", seq, "equilibrium population difference s_eq");
    }

    SystemParams build() const {
        SystemParams p;
        p.omega0 = hz_to_rad(larmor_hz);
        p.omega_drive = drive_hz < 0.0 ? p.omega0 : hz_to_rad(drive_hz);
        p.omega1 = hz_to_rad(rabi_hz);
        p.s_eq = seq;
        if (!t12.empty()) {
            p.t1 = p.t2 = parse_time(t12);
        } else {
            if (!t1.empty()) p.t1 = parse_time(t1);
            if (!t2.empty()) p.t2 = parse_time(t2);
        }
        return validate_params(p);
    }
};

std::string out_path(const std::string& outdir, const std::string& name) {
    fs::path dir = outdir;
    if (dir.empty()) {
        if (const char* env = std::getenv("SRBLOCH_OUTDIR")) dir = env;
        else dir = ".";
    }
    fs::create_directories(dir);
    return (dir / name).string();
}

void warn_if_not_psd(const SystemParams& p) {
    const PsdReport rep = psd_check(relaxation_matrix(p));
    if (!rep.is_psd) {
        std::cerr << "warning: relaxation matrix not positive semidefinite "
                  << "(min eigenvalue " << rep.min_eigenvalue
                  << "); |s_eq| <= 1/sqrt(2) is the PSD region\n";
    }
}

std::vector<double> scaled_grid(const SweepSpec& spec) {
    // Manifest/CLI grids are in ms for time controls and Hz for omega1.
    std::vector<double> g = spec.make_grid();
    const double scale = spec.control == SweepControl::Omega1 ? two_pi : 1e-3;
    for (double& x : g) x *= scale;
    return g;
}

int run_sweep_t12(const ExperimentSpec& e, const std::string& outdir, bool numeric) {
    SweepResult r = sweep_t12(e.params.omega1, e.params.s_eq, scaled_grid(*e.sweep));
    if (numeric) {
        // Cross-check a subsample of the grid through full integration.
        const std::size_t stride = std::max<std::size_t>(1, r.grid.size() / 20);
        for (std::size_t i = 0; i < r.grid.size(); i += stride) {
            SystemParams p = e.params;
            p.t1 = p.t2 = r.grid[i];
            const double num = eta_numeric(p);
            if (std::abs(num - r.response[i]) > 1e-6) {
                std::cerr << "numeric cross-check failed at t12=" << r.grid[i] << "\n";
                return kExitNumeric;
            }
        }
    }
    write_sweep_csv(r, e.params.s_eq, out_path(outdir, e.output));
    std::cout << e.id << ": wrote " << e.output;
    if (r.extremum.kind == ExtremumKind::Max) {
        std::cout << " (peak at t12=" << r.extremum.location * 1e3
                  << " ms, eta/s_eq=" << r.extremum.value / std::abs(e.params.s_eq) << ")";
    }
    std::cout << "\n";
    return kExitOk;
}

int run_sweep_omega1(const ExperimentSpec& e, const std::string& outdir, bool numeric) {
    SweepResult r =
        sweep_omega1(e.params.t1, e.params.t2, e.params.s_eq, scaled_grid(*e.sweep));
    if (numeric) {
        const std::size_t stride = std::max<std::size_t>(1, r.grid.size() / 20);
        for (std::size_t i = 0; i < r.grid.size(); i += stride) {
            SystemParams p = e.params;
            p.omega1 = r.grid[i];
            const double num = eta_numeric(p);
            if (std::abs(num - r.response[i]) > 1e-6) {
                std::cerr << "numeric cross-check failed at omega1=" << r.grid[i] << "\n";
                return kExitNumeric;
            }
        }
    }
    write_sweep_csv(r, e.params.s_eq, out_path(outdir, e.output));
    std::cout << e.id << ": wrote " << e.output;
    if (r.extremum.kind == ExtremumKind::Max) {
        std::cout << " (peak at omega1/2pi=" << rad_to_hz(r.extremum.location)
                  << " Hz, eta/s_eq=" << r.extremum.value / std::abs(e.params.s_eq) << ")";
    }
    std::cout << "\n";
    return kExitOk;
}

int run_experiment(const ExperimentSpec& e, const std::string& outdir, bool numeric) {
    warn_if_not_psd(e.params);
    if (e.kind == "steady") {
        const SteadyStateSolution sol = steady_state_rotating(e.params, e.params.detuning());
        std::cout << e.id << ": eta = " << sol.eta << " (eta/s_eq = "
                  << sol.eta / std::abs(e.params.s_eq) << ")\n";
        return kExitOk;
    }
    if (e.kind == "sweep-t12") return run_sweep_t12(e, outdir, numeric);
    if (e.kind == "sweep-omega1") return run_sweep_omega1(e, outdir, numeric);
    if (e.kind == "long-pulse" || e.kind == "simulate") {
        const double duration = 12.0 * std::max(e.params.t1, e.params.t2);
        const AcquisitionRecord rec =
            long_pulse_response(e.params, duration, duration / 1000.0, e.integrator);
        write_series_csv(rec.times, rec.values, "time_s", "transverse_magnitude",
                         out_path(outdir, e.output));
        std::cout << e.id << ": wrote " << e.output << "\n";
        return kExitOk;
    }
    std::cerr << "experiment kind '" << e.kind << "' is not runnable here\n";
    return kExitUsage;
}

void print_params(const SystemParams& p) {
    std::cout << "omega0/2pi = " << rad_to_hz(p.omega0) << " Hz\n"
              << "omega1/2pi = " << rad_to_hz(p.omega1) << " Hz\n"
              << "Omega/2pi  = " << rad_to_hz(p.omega_drive) << " Hz\n"
              << "T1 = " << p.t1 * 1e3 << " ms, T2 = " << p.t2 * 1e3 << " ms\n"
              << "s_eq = " << p.s_eq << ", weak-drive regime: "
              << (p.weak_drive ? "yes" : "no") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bloch-equation stochastic resonance toolkit"};
    app.require_subcommand(1);
    std::cout << std::setprecision(10);

    std::string outdir;
    app.add_option("--outdir", outdir,
                   "output directory (default: $SRBLOCH_OUTDIR or '.')");

    // steady
    auto* steady = app.add_subcommand("steady", "closed-form steady-state response");
    ParamFlags steady_p;
    steady_p.attach(steady);

    // sweep-t12
    auto* sw_t12 = app.add_subcommand("sweep-t12", "response vs common relaxation time");
    ParamFlags sw_t12_p;
    sw_t12_p.attach(sw_t12);
    std::string sw_t12_grid = "5:80:301";
    std::string sw_t12_out = "sweep_t12.csv";
    bool sw_t12_numeric = false;
    sw_t12->add_option("--grid", sw_t12_grid, "T12 grid lo:hi:count in ms");
    sw_t12->add_option("-o,--output", sw_t12_out, "output CSV name");
    sw_t12->add_flag("--numeric", sw_t12_numeric, "cross-check by full integration");

    // sweep-omega1
    auto* sw_w1 = app.add_subcommand("sweep-omega1", "response vs Rabi frequency");
    ParamFlags sw_w1_p;
    sw_w1_p.attach(sw_w1);
    std::string sw_w1_grid = "0.5:30:301";
    std::string sw_w1_out = "sweep_omega1.csv";
    bool sw_w1_numeric = false;
    sw_w1->add_option("--grid", sw_w1_grid, "omega1/2pi grid lo:hi:count in Hz");
    sw_w1->add_option("-o,--output", sw_w1_out, "output CSV name");
    sw_w1->add_flag("--numeric", sw_w1_numeric, "cross-check by full integration");

    // simulate
    auto* sim = app.add_subcommand("simulate", "time-domain trajectory");
    ParamFlags sim_p;
    sim_p.attach(sim);
    std::string sim_duration = "250ms", sim_out = "trajectory.csv";
    bool sim_lab = false;
    int sim_samples = 2000;
    sim->add_option("--duration", sim_duration, "simulated time (e.g. 250ms)");
    sim->add_option("--samples", sim_samples, "number of output samples");
    sim->add_flag("--lab", sim_lab, "integrate the lab-frame Bloch equations");
    sim->add_option("-o,--output", sim_out, "output CSV name");

    // long-pulse
    auto* lp = app.add_subcommand("long-pulse", "steady-state acquisition protocol");
    ParamFlags lp_p;
    lp_p.attach(lp);
    std::string lp_duration = "250ms", lp_out;
    lp->add_option("--duration", lp_duration, "pulse duration");
    lp->add_option("-o,--output", lp_out, "optional CSV of the readout");

    // measure-t1
    auto* mt1 = app.add_subcommand("measure-t1", "inversion-recovery T1 measurement");
    ParamFlags mt1_p;
    mt1_p.attach(mt1);
    int mt1_ndelays = 12;
    double mt1_noise = 0.0;
    std::uint64_t mt1_seed = 1;
    mt1->add_option("--delays", mt1_ndelays, "number of log-spaced delays");
    mt1->add_option("--noise-sigma", mt1_noise, "additive Gaussian noise amplitude");
    mt1->add_option("--seed", mt1_seed, "noise seed");

    // measure-t2
    auto* mt2 = app.add_subcommand("measure-t2", "Carr-Purcell T2 measurement");
    ParamFlags mt2_p;
    mt2_p.attach(mt2);
    std::string mt2_tau = "5ms";
    int mt2_echoes = 10;
    double mt2_noise = 0.0, mt2_spread_hz = 0.0;
    std::uint64_t mt2_seed = 1;
    mt2->add_option("--tau-echo", mt2_tau, "half echo spacing");
    mt2->add_option("--echoes", mt2_echoes, "number of echoes");
    mt2->add_option("--spread-hz", mt2_spread_hz, "inhomogeneous broadening sigma in Hz");
    mt2->add_option("--noise-sigma", mt2_noise, "additive Gaussian noise amplitude");
    mt2->add_option("--seed", mt2_seed, "noise seed");

    // reproduce
    auto* rep = app.add_subcommand("reproduce", "write the canned fig1/fig2/table1 data");
    std::string rep_name;
    bool rep_numeric = false;
    rep->add_option("target", rep_name, "fig1 | fig2 | table1")->required();
    rep->add_flag("--numeric", rep_numeric, "cross-check by full integration");

    // validate
    auto* val = app.add_subcommand("validate", "parameter and PSD diagnostics");
    ParamFlags val_p;
    val_p.attach(val);
    std::string val_manifest;
    val->add_option("--manifest", val_manifest, "validate a manifest file instead");

    // run
    auto* run = app.add_subcommand("run", "execute every experiment in a manifest");
    std::string run_manifest;
    bool run_numeric = false;
    run->add_option("manifest", run_manifest, "manifest file")->required();
    run->add_flag("--numeric", run_numeric, "cross-check sweeps by full integration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (steady->parsed()) {
            const SystemParams p = steady_p.build();
            warn_if_not_psd(p);
            const SteadyStateSolution sol = steady_state_rotating(p, p.detuning());
            std::cout << "eta = " << sol.eta << "\n"
                      << "eta/s_eq = " << sol.eta / std::abs(p.s_eq) << "\n"
                      << "u = " << sol.u << ", v = " << sol.v << ", w = " << sol.w << "\n"
                      << "chi' = " << sol.chi_prime << ", chi'' = " << sol.chi_double_prime
                      << "\n";
        } else if (sw_t12->parsed()) {
            ExperimentSpec e;
            e.id = "sweep-t12";
            e.kind = "sweep-t12";
            e.params = sw_t12_p.build();
            SweepSpec spec;
            spec.control = SweepControl::T12;
            const auto c1 = sw_t12_grid.find(':'), c2 = sw_t12_grid.rfind(':');
            if (c1 == std::string::npos || c2 == c1)
                throw ConfigParse("--grid must be lo:hi:count");
            spec.lo = std::stod(sw_t12_grid.substr(0, c1));
            spec.hi = std::stod(sw_t12_grid.substr(c1 + 1, c2 - c1 - 1));
            spec.points = std::stoul(sw_t12_grid.substr(c2 + 1));
            e.sweep = spec;
            e.output = sw_t12_out;
            warn_if_not_psd(e.params);
            return run_sweep_t12(e, outdir, sw_t12_numeric);
        } else if (sw_w1->parsed()) {
            ExperimentSpec e;
            e.id = "sweep-omega1";
            e.kind = "sweep-omega1";
            e.params = sw_w1_p.build();
            SweepSpec spec;
            spec.control = SweepControl::Omega1;
            const auto c1 = sw_w1_grid.find(':'), c2 = sw_w1_grid.rfind(':');
            if (c1 == std::string::npos || c2 == c1)
                throw ConfigParse("--grid must be lo:hi:count");
            spec.lo = std::stod(sw_w1_grid.substr(0, c1));
            spec.hi = std::stod(sw_w1_grid.substr(c1 + 1, c2 - c1 - 1));
            spec.points = std::stoul(sw_w1_grid.substr(c2 + 1));
            e.sweep = spec;
            e.output = sw_w1_out;
            warn_if_not_psd(e.params);
            return run_sweep_omega1(e, outdir, sw_w1_numeric);
        } else if (sim->parsed()) {
            const SystemParams p = sim_p.build();
            warn_if_not_psd(p);
            const double duration = parse_time(sim_duration);
            const std::vector<double> samples =
                linspace(0.0, duration, static_cast<std::size_t>(sim_samples));
            std::ostringstream os;
            if (sim_lab) {
                const Trajectory traj =
                    integrate_bloch(p, {0.0, 0.0, p.s_eq}, duration, {}, samples);
                os << "# time_s,s1,s2,s3\n";
                for (std::size_t i = 0; i < traj.size(); ++i) {
                    os << traj.t[i] << ',' << traj.y[i][0] << ',' << traj.y[i][1] << ','
                       << traj.y[i][2] << '\n';
                }
            } else {
                const Trajectory traj = integrate_rotating(
                    p, p.detuning(), {0.0, 0.0, p.s_eq, 0.0}, duration, {}, samples);
                os << "# time_s,u,v,w\n";
                for (std::size_t i = 0; i < traj.size(); ++i) {
                    os << traj.t[i] << ',' << traj.y[i][0] << ',' << traj.y[i][1] << ','
                       << traj.y[i][2] << '\n';
                }
            }
            const std::string path = out_path(outdir, sim_out);
            std::ofstream f(path);
            f << os.str();
            std::cout << "wrote " << path << "\n";
        } else if (lp->parsed()) {
            const SystemParams p = lp_p.build();
            warn_if_not_psd(p);
            const double duration = parse_time(lp_duration);
            const AcquisitionRecord rec =
                long_pulse_response(p, duration, duration / 500.0);
            std::cout << "final transverse magnitude = " << rec.values.back() << "\n"
                      << "analytic eta = " << eta_resonant(p) << "\n";
            if (!lp_out.empty()) {
                write_series_csv(rec.times, rec.values, "time_s", "transverse_magnitude",
                                 out_path(outdir, lp_out));
            }
        } else if (mt1->parsed()) {
            const SystemParams p = mt1_p.build();
            std::vector<double> delays(static_cast<std::size_t>(mt1_ndelays));
            for (std::size_t i = 0; i < delays.size(); ++i) {
                const double f = static_cast<double>(i) / (delays.size() - 1);
                delays[i] = 0.05 * p.t1 * std::pow(5.0 / 0.05, f);  // 0.05 T1 .. 5 T1
            }
            AcquisitionRecord rec = inversion_recovery(p, delays);
            if (mt1_noise > 0.0) rec = add_noise(rec, mt1_noise, mt1_seed);
            const T1Fit fit = fit_t1(rec);
            std::cout << "t1_hat = " << fit.t1_hat * 1e3 << " ms (true "
                      << p.t1 * 1e3 << " ms), m0_hat = " << fit.m0_hat
                      << ", residual = " << fit.residual_norm << "\n";
        } else if (mt2->parsed()) {
            const SystemParams p = mt2_p.build();
            const IsochromatEnsemble ens =
                IsochromatEnsemble::gaussian(hz_to_rad(mt2_spread_hz));
            AcquisitionRecord rec =
                carr_purcell(p, ens, parse_time(mt2_tau), mt2_echoes);
            if (mt2_noise > 0.0) rec = add_noise(rec, mt2_noise, mt2_seed);
            const T2Fit fit = fit_t2(rec);
            std::cout << "t2_hat = " << fit.t2_hat * 1e3 << " ms (true "
                      << p.t2 * 1e3 << " ms), residual = " << fit.residual_norm << "\n";
        } else if (rep->parsed()) {
            const ExperimentManifest m = builtin_manifest(rep_name);
            if (rep_name == "table1") {
                std::ostringstream os;
                os << "# cuso4_mM,t12_ms,eta_over_seq_at_6.3Hz\n";
                for (const ExperimentSpec& e : m.experiments) {
                    os << *e.label << ',' << e.params.t1 * 1e3 << ','
                       << eta_resonant(e.params) / std::abs(e.params.s_eq) << '\n';
                }
                const std::string path = out_path(outdir, "table1.csv");
                std::ofstream f(path);
                f << os.str();
                std::cout << "wrote " << path << "\n";
            } else {
                for (const ExperimentSpec& e : m.experiments) {
                    const int rc = run_experiment(e, outdir, rep_numeric);
                    if (rc != kExitOk) return rc;
                }
            }
        } else if (val->parsed()) {
            if (!val_manifest.empty()) {
                const ExperimentManifest m = load_manifest(val_manifest);
                for (const ExperimentSpec& e : m.experiments) {
                    const PsdReport r = psd_check(relaxation_matrix(e.params));
                    std::cout << e.id << ": valid, psd="
                              << (r.is_psd ? "yes" : "no")
                              << " (min eigenvalue " << r.min_eigenvalue << ")\n";
                }
            } else {
                const SystemParams p = val_p.build();
                print_params(p);
                const PsdReport r = psd_check(relaxation_matrix(p));
                std::cout << "relaxation matrix PSD: " << (r.is_psd ? "yes" : "no")
                          << " (min eigenvalue " << r.min_eigenvalue << " 1/s)\n";
                if (!r.is_psd) warn_if_not_psd(p);
            }
        } else if (run->parsed()) {
            const ExperimentManifest m = load_manifest(run_manifest);
            for (const ExperimentSpec& e : m.experiments) {
                const int rc = run_experiment(e, outdir, run_numeric);
                if (rc != kExitOk) return rc;
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
