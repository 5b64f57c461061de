#include "srbloch/steady_state.hpp"

#include <cmath>
#include <complex>

namespace srbloch {

double eta_resonant(const SystemParams& p) {
    return p.s_eq * p.omega1 * p.t2 / (1.0 + p.omega1 * p.omega1 * p.t1 * p.t2);
}

SteadyStateSolution steady_state_rotating(const SystemParams& p, double detuning) {
    const double dt2 = detuning * p.t2;
    const double denom = 1.0 + dt2 * dt2 + p.omega1 * p.omega1 * p.t1 * p.t2;
    SteadyStateSolution sol;
    sol.u = p.s_eq * p.omega1 * detuning * p.t2 * p.t2 / denom;
    sol.v = p.s_eq * p.omega1 * p.t2 / denom;
    sol.w = p.s_eq * (1.0 + dt2 * dt2) / denom;
    sol.eta = std::hypot(sol.u, sol.v);
    if (p.omega1 > 0.0 && p.s_eq != 0.0) {
        const double scale = 2.0 * p.omega1 * p.t2 * p.s_eq;
        sol.chi_prime = sol.u / scale;
        sol.chi_double_prime = sol.v / scale;
    }
    return sol;
}

std::pair<double, double> susceptibility(const SystemParams& p, double detuning) {
    if (p.omega1 <= 0.0) {
        throw ZeroDrive("susceptibility: omega1 must be > 0");
    }
    if (p.s_eq == 0.0) {
        throw ZeroDrive("susceptibility: s_eq must be nonzero");
    }
    const SteadyStateSolution sol = steady_state_rotating(p, detuning);
    return {sol.chi_prime, sol.chi_double_prime};
}

double fundamental_amplitude(const std::vector<double>& times,
                             const std::vector<double>& s1, double omega_drive) {
    const std::size_t n = times.size();
    if (n < 2 || s1.size() != n) {
        throw NonUniformSampling("fundamental_amplitude: need matched sample arrays");
    }
    const double span = times.back() - times.front();
    const double dt = span / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * dt) {
            throw NonUniformSampling("fundamental_amplitude: non-uniform sampling");
        }
    }
    const double period = two_pi / omega_drive;
    // The window [t0, t0 + N*period) is covered by samples 0..n-2; the last
    // sample closes the final period exactly.
    const double n_periods = (span + dt) / period;
    const double n_rounded = std::round(n_periods);
    if (std::abs(n_periods - n_rounded) > 1e-6 || n_rounded < 10.0) {
        throw WindowNotPeriodAligned(
            "fundamental_amplitude: window must cover an integer number (>= 10) of periods");
    }
    if (static_cast<double>(n) / n_rounded < 32.0) {
        throw NonUniformSampling("fundamental_amplitude: need >= 32 samples per period");
    }
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += s1[i] * std::exp(std::complex<double>(0.0, omega_drive * times[i]));
    }
    acc /= static_cast<double>(n);
    return 2.0 * std::abs(acc);
}

double fundamental_amplitude(const Trajectory& traj, double omega_drive) {
    std::vector<double> s1(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) s1[i] = traj.y[i][0];
    return fundamental_amplitude(traj.t, s1, omega_drive);
}

double eta_numeric(const SystemParams& p, double detuning, const IntegratorConfig& cfg) {
    const double t_relax = std::max(p.t1, p.t2);
    // Transients decay as exp(-t/T); 25 relaxation times leaves residuals
    // near 1e-10, below the default detection eps.
    const double t_end = 25.0 * t_relax;
    const RotatingState mu0{0.0, 0.0, p.s_eq, 0.0};
    IntegratorConfig local = cfg;
    // Keep enough accepted steps inside the detection window.
    const double cap = 0.25 * t_relax;
    if (local.max_step <= 0.0 || local.max_step > cap) local.max_step = cap;
    const Trajectory traj = integrate_rotating(p, detuning, mu0, t_end, local);
    const SteadyDetection det = detect_steady_state(traj, 2.0 * t_relax);
    if (!det.converged) {
        throw NumericError("eta_numeric: steady state not reached");
    }
    return std::hypot(det.steady.u, det.steady.v);
}

}  // namespace srbloch
