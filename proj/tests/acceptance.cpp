// Acceptance suite: end-to-end checks of the steady-state response formulas,
// the SR peak laws, generator equivalence, conservation, RWA residuals, and
// the measurement-protocol round trips. Prints one pass/fail line per
// criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "srbloch/core.hpp"
#include "srbloch/dynamics.hpp"
#include "srbloch/pulse_sim.hpp"
#include "srbloch/sr_analysis.hpp"
#include "srbloch/steady_state.hpp"

using namespace srbloch;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const char* what, double worst = -1.0) {
    if (worst >= 0.0) {
        std::printf("criterion %d: %-4s  %s (worst %.3e)\n", criterion,
                    pass ? "PASS" : "FAIL", what, worst);
    } else {
        std::printf("criterion %d: %-4s  %s\n", criterion, pass ? "PASS" : "FAIL", what);
    }
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. SR peak over T12 for the three drive amplitudes, analytic and numeric.
void criterion_sr_peak() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst = 0.0;
    for (double hz : {6.3, 5.5, 4.8}) {
        const double w1 = hz_to_rad(hz);
        const SweepResult r = sweep_t12(w1, 1.0, linspace(5e-3, 80e-3, 301));
        if (r.extremum.kind != ExtremumKind::Max) {
            pass = false;
            continue;
        }
        const double loc_err = std::abs(w1 * r.extremum.location - 1.0);
        const double peak_err = std::abs(r.extremum.value - 0.5);
        worst = std::max({worst, loc_err, peak_err});
        pass = pass && loc_err < 1e-6 && peak_err < 1e-9;
    }
    const double analytic_s = seconds_since(t0);
    pass = pass && analytic_s < 10.0;
    report(1, pass, "SR peak: omega1*T12* = 1, eta/s_eq = 1/2 (analytic)", worst);

    const auto t1 = std::chrono::steady_clock::now();
    bool num_pass = true;
    double num_worst = 0.0;
    for (double hz : {6.3, 5.5, 4.8}) {
        const double w1 = hz_to_rad(hz);
        for (double t12 : linspace(5e-3, 80e-3, 20)) {
            SystemParams p;
            p.t1 = p.t2 = t12;
            p.omega1 = w1;
            p.s_eq = 1.0;
            const double err = std::abs(eta_numeric(p) - eta_resonant(p));
            num_worst = std::max(num_worst, err);
            num_pass = num_pass && err < 1e-6;
        }
    }
    num_pass = num_pass && seconds_since(t1) < 300.0;
    report(1, num_pass, "SR peak: numeric integration matches the closed form",
           num_worst);
}

// 2. Optimal drive omega1* = (T1 T2)^{-1/2} for the reference relaxation times.
void criterion_optimal_drive() {
    bool pass = true;
    double worst = 0.0;
    const double quoted_hz[] = {8.84, 5.59, 3.50};
    int i = 0;
    for (double t12 : {18.0e-3, 28.5e-3, 45.5e-3}) {
        const SweepResult r =
            sweep_omega1(t12, t12, 1.0, linspace(hz_to_rad(0.5), hz_to_rad(30.0), 301));
        if (r.extremum.kind != ExtremumKind::Max) {
            pass = false;
            continue;
        }
        const double derived_hz = rad_to_hz(1.0 / t12);
        const double rel = std::abs(rad_to_hz(r.extremum.location) - derived_hz) / derived_hz;
        worst = std::max(worst, rel);
        pass = pass && rel < 1e-3;
        // the quoted two-decimal values sit within rounding of the formula
        if (std::abs(derived_hz - quoted_hz[i]) > 0.006 * quoted_hz[i]) pass = false;
        ++i;
    }
    report(2, pass, "optimal drive omega1* = (T1 T2)^{-1/2}", worst);
}

// 3/4. Generator equivalence over 50 random parameter sets, with the
// conservation suite measured on the same runs.
void criterion_equivalence_and_conservation() {
    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> ut1(5e-3, 80e-3), us(-0.7, 0.7),
        uw0(0.0, 400.0), uw1(0.0, 80.0), ug(-1.0, 1.0);
    bool pass = true;
    double worst = 0.0;
    double worst_trace = 0.0, worst_herm = 0.0, worst_norm = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        SystemParams p;
        p.t1 = ut1(rng);
        std::uniform_real_distribution<double> ut2(0.5 * p.t1, 2.0 * p.t1);
        p.t2 = ut2(rng);
        p.s_eq = us(rng);
        p.omega0 = uw0(rng);
        p.omega_drive = p.omega0;
        p.omega1 = uw1(rng);
        p = validate_params(p);

        Eigen::Vector3d v(ug(rng), ug(rng), ug(rng));
        if (v.norm() > 1.0) v /= v.norm() * 1.001;
        const BlochState s0{v[0], v[1], v[2]};

        IntegratorConfig cfg;
        cfg.abs_tol = cfg.rel_tol = 1e-10;
        const double t_end = 5.0 * p.t1;
        const std::vector<double> samples = linspace(0.1 * t_end, t_end, 25);
        const Trajectory tb = integrate_bloch(p, s0, t_end, cfg, samples);
        const Trajectory tl =
            integrate_lindblad(p, bloch_to_density(s0), t_end, cfg, samples);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const DensityMatrix rho = density_from_vec(tl.y[i]);
            worst_trace = std::max(worst_trace, std::abs(rho.trace() - 1.0));
            worst_herm = std::max(
                worst_herm, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
            worst_norm = std::max(worst_norm, tb.y[i].head<3>().norm());
            for (int k = 0; k < 3; ++k) {
                const double sk = (rho * pauli(k + 1)).trace().real();
                worst = std::max(worst, std::abs(sk - tb.y[i][k]));
            }
        }
    }
    pass = worst < 1e-8;
    report(3, pass, "Lindblad vs Bloch agreement over 5 T1, 50 random sets", worst);

    const bool conserve = worst_trace < 1e-9 && worst_herm < 1e-9 &&
                          worst_norm <= 1.0 + 1e-9;
    report(4, conserve, "trace/Hermiticity drift < 1e-9, Bloch norm <= 1+1e-9",
           std::max({worst_trace, worst_herm, worst_norm - 1.0}));
}

// 5. RWA validation at scaled omega0 (the true 400 MHz lab frame is not
// desk-scale integrable; 10 kHz stands in).
void criterion_rwa() {
    SystemParams p;
    p.omega0 = hz_to_rad(10e3);
    p.omega_drive = p.omega0;
    p.omega1 = hz_to_rad(6.3);
    p.t1 = p.t2 = 25e-3;
    p.s_eq = 1.0;
    p = validate_params(p);

    const double period = two_pi / p.omega_drive;
    const double t_settle = 20.0 * p.t1;
    const std::size_t per_period = 64, n_periods = 20;
    const std::size_t n = per_period * n_periods;
    const double dt = period / per_period;
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) samples[i] = t_settle + dt * i;

    IntegratorConfig cfg;
    cfg.abs_tol = cfg.rel_tol = 1e-10;
    cfg.max_step = period / 16.0;
    const Trajectory traj =
        integrate_bloch(p, {0.0, 0.0, p.s_eq}, samples.back(), cfg, samples);
    const double eta_lab = fundamental_amplitude(traj, p.omega_drive);
    const double eta_rwa = eta_resonant(p);
    const double rel = std::abs(eta_lab - eta_rwa) / eta_rwa;
    report(5, rel < 0.007, "lab-frame fundamental amplitude vs RWA eta", rel);
}

// 6. Protocol round trips for the five reference relaxation times.
void criterion_protocol_roundtrip() {
    const double table1[] = {45.5e-3, 36.5e-3, 28.5e-3, 25.0e-3, 18.0e-3};
    bool pass = true;
    double worst_rel = 0.0, worst_abs = 0.0;
    for (double t12 : table1) {
        SystemParams p;
        p.t1 = p.t2 = t12;
        p.s_eq = 1.0;
        p = validate_params(p);

        std::vector<double> delays(16);
        for (std::size_t i = 0; i < delays.size(); ++i) {
            delays[i] = 0.05 * t12 * std::pow(100.0, i / 15.0);
        }
        const AcquisitionRecord ir = inversion_recovery(p, delays);
        const IsochromatEnsemble ens = IsochromatEnsemble::gaussian(hz_to_rad(40.0));
        const AcquisitionRecord cp = carr_purcell(p, ens, t12 / 8.0, 12);

        const double t1_clean = fit_t1(ir).t1_hat;
        const double t2_clean = fit_t2(cp).t2_hat;
        worst_rel = std::max({worst_rel, std::abs(t1_clean - t12) / t12,
                              std::abs(t2_clean - t12) / t12});

        const double t1_noisy = fit_t1(add_noise(ir, 0.01, 7)).t1_hat;
        const double t2_noisy = fit_t2(add_noise(cp, 0.01, 11)).t2_hat;
        worst_abs = std::max({worst_abs, std::abs(t1_noisy - t12),
                              std::abs(t2_noisy - t12)});
    }
    pass = worst_rel < 1e-3 && worst_abs < 1e-3;
    std::printf("criterion 6: %-4s  T1/T2 round trip (noiseless worst rel %.2e, "
                "1%% noise worst %.3f ms)\n",
                (worst_rel < 1e-3 && worst_abs < 1e-3) ? "PASS" : "FAIL", worst_rel,
                worst_abs * 1e3);
    if (!pass) ++g_failures;
}

// 7. Linear-response crossover.
void criterion_linear_crossover() {
    const double t12 = 20e-3;
    SystemParams p;
    p.t1 = p.t2 = t12;
    p.s_eq = 1.0;

    p.omega1 = 0.01 / t12;
    const double rel_small =
        std::abs(linear_response_eta(p) - eta_resonant(p)) / eta_resonant(p);

    p.omega1 = 1.0 / t12;
    const double factor = linear_response_eta(p) / eta_resonant(p);

    const bool pass = rel_small < 1e-4 + 1e-8 && std::abs(factor - 2.0) < 1e-9;
    report(7, pass, "linear response: 1e-4 residual at omega1*T12 = 0.01, factor 2 at 1",
           std::max(rel_small - 1e-4, std::abs(factor - 2.0)));
}

// 8. Monotonicity along independent axes, non-monotonic along T1 = T2.
void criterion_monotonicity() {
    const double w1 = hz_to_rad(6.3);
    const MonotonicityReport inc = monotonicity_report(
        w1, 1.0, SweepControl::T2, 50e-3, linspace(1e-3, 100e-3, 1000));
    const MonotonicityReport dec = monotonicity_report(
        w1, 1.0, SweepControl::T1, 10e-3, linspace(1e-3, 100e-3, 1000));
    const MonotonicityReport both = monotonicity_report(
        w1, 1.0, SweepControl::T12, 0.0, linspace(5e-3, 80e-3, 1000));

    // unique interior maximum: exactly one sign change of the differences
    const std::vector<double> grid = linspace(5e-3, 80e-3, 1000);
    const SweepResult sweep = sweep_t12(w1, 1.0, grid);
    int sign_changes = 0;
    for (std::size_t i = 2; i < grid.size(); ++i) {
        const double d_prev = sweep.response[i - 1] - sweep.response[i - 2];
        const double d = sweep.response[i] - sweep.response[i - 1];
        if (d_prev > 0.0 && d < 0.0) ++sign_changes;
    }
    const bool pass = inc.is_monotonic && inc.direction == Direction::Increasing &&
                      dec.is_monotonic && dec.direction == Direction::Decreasing &&
                      !both.is_monotonic && sign_changes == 1 &&
                      sweep.extremum.kind == ExtremumKind::Max;
    report(8, pass, "eta monotone in T2 (up) and T1 (down); unique SR peak on T1=T2");
}

}  // namespace

int main() {
    criterion_sr_peak();
    criterion_optimal_drive();
    criterion_equivalence_and_conservation();
    criterion_rwa();
    criterion_protocol_roundtrip();
    criterion_linear_crossover();
    criterion_monotonicity();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criterion(s) FAILED\n", g_failures);
    }
    return g_failures;
}
