#pragma once

#include <utility>
#include <vector>

#include "srbloch/core.hpp"
#include "srbloch/dynamics.hpp"

namespace srbloch {

/// Closed-form steady state of the rotating-frame equations plus derived
/// response quantities. chi_prime/chi_double_prime are the normalized
/// dispersive/absorptive susceptibility components.
struct SteadyStateSolution {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    double eta = 0.0;  ///< sqrt(u^2 + v^2)
    double chi_prime = 0.0;
    double chi_double_prime = 0.0;
};

/// Resonant nonlinear response eta = s_eq * omega1 T2 / (1 + omega1^2 T1 T2).
double eta_resonant(const SystemParams& p);

/// General steady state (Torrey solution), D = 1 + Delta^2 T2^2 + omega1^2 T1 T2:
///   u = s_eq omega1 Delta T2^2 / D
///   v = s_eq omega1 T2 / D
///   w = s_eq (1 + Delta^2 T2^2) / D
SteadyStateSolution steady_state_rotating(const SystemParams& p, double detuning = 0.0);

/// Normalized susceptibility pair (chi', chi'') = (u, v) / (2 omega1 T2 s_eq).
/// Scale-free: only ratios and lineshapes are contract-bearing.
/// Throws ZeroDrive when omega1 = 0 (or s_eq = 0).
std::pair<double, double> susceptibility(const SystemParams& p, double detuning = 0.0);

/// Fundamental Fourier amplitude of a uniformly sampled lab-frame signal
/// s1(t) over an integer number (>= 10) of drive periods:
/// 2 |mean of s1(t) exp(i Omega t)|.
/// Throws NonUniformSampling or WindowNotPeriodAligned.
double fundamental_amplitude(const std::vector<double>& times,
                             const std::vector<double>& s1, double omega_drive);

/// Same, pulling the first state component out of a lab-frame trajectory.
double fundamental_amplitude(const Trajectory& traj, double omega_drive);

/// Numeric route to eta: integrate the rotating-frame system from
/// equilibrium until steady, then report sqrt(u^2+v^2).
/// Throws NumericError when the trajectory has not converged.
double eta_numeric(const SystemParams& p, double detuning = 0.0,
                   const IntegratorConfig& cfg = {});

}  // namespace srbloch
