#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "srbloch/core.hpp"

namespace srbloch {

/// Lab-frame Bloch equations:
///   s1' =  omega0 s2 - s1/T2
///   s2' = -omega0 s1 - s2/T2 + 2 omega1 cos(Omega t) s3
///   s3' = -2 omega1 cos(Omega t) s2 - (s3 - s_eq)/T1
Eigen::Vector3d bloch_rhs(double t, const BlochState& s, const SystemParams& p);

/// Markovian master equation with the Bloch relaxation matrix:
///   rho' = -i [H(t), rho] + 1/2 sum_kl a_kl ([sk rho, sl] + [sk, rho sl])
/// with H(t) = omega0 sigma3/2 + 2 omega1 cos(Omega t) sigma1/2 (hbar = 1).
DensityMatrix lindblad_rhs(double t, const DensityMatrix& rho, const SystemParams& p);

/// Rotating-frame equations under the RWA, detuning Delta = omega0 - Omega:
///   u' =  Delta v - u/T2
///   v' = -Delta u - v/T2 + omega1 w
///   w' = -omega1 v - (w - s_eq)/T1
Eigen::Vector3d rotating_rhs(double t, const RotatingState& mu, const SystemParams& p,
                             double detuning);

/// Frame rotation (u + iv) = exp(+i Omega t) (s1 + i s2), w = s3.
RotatingState lab_to_rotating(const BlochState& s, double t, double omega_drive);
BlochState rotating_to_lab(const RotatingState& mu, double t, double omega_drive);

enum class Method {
    RungeKutta4,      ///< fixed-step classical 4th order
    DormandPrince45,  ///< embedded adaptive 4(5)th order
};

struct IntegratorConfig {
    Method method = Method::DormandPrince45;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = 0.0;   ///< 0 means span/10
    double init_step = 0.0;  ///< 0 means auto
    long max_steps = 20'000'000;
};

struct IntegratorStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    double final_step = 0.0;
};

/// Time-stamped state sequence, strictly increasing t.
struct Trajectory {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> y;
    IntegratorStats stats;

    std::size_t size() const { return t.size(); }
};

using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Integrate y' = rhs(t, y) over [t0, t1]. If sample_times is non-empty the
/// trajectory holds the state at exactly those times (cubic Hermite dense
/// output between accepted steps); otherwise it holds the accepted steps.
/// Throws StepSizeUnderflow or MaxStepsExceeded.
Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                     const IntegratorConfig& cfg = {},
                     const std::vector<double>& sample_times = {});

struct SteadyDetection {
    bool converged = false;
    RotatingState steady;
};

/// Inspects the trailing `window` seconds of a rotating-frame trajectory
/// (3-component states). Converged iff the max pointwise change over the
/// window is < eps; steady is the mean over the window.
/// Throws InsufficientSamples when the window holds fewer than 2 samples.
SteadyDetection detect_steady_state(const Trajectory& traj, double window,
                                    double eps = 1e-8);

// Convenience wrappers producing 3-vector initial states.
Eigen::Vector3d to_vec(const BlochState& s);
Eigen::Vector3d to_vec(const RotatingState& mu);
BlochState bloch_from_vec(const Eigen::Vector3d& v);
RotatingState rotating_from_vec(const Eigen::Vector3d& v, double phase = 0.0);

/// Integrate the rotating-frame system from `mu0` over [0, t_end].
Trajectory integrate_rotating(const SystemParams& p, double detuning,
                              const RotatingState& mu0, double t_end,
                              const IntegratorConfig& cfg = {},
                              const std::vector<double>& sample_times = {});

/// Integrate the lab-frame Bloch system from `s0` over [0, t_end].
Trajectory integrate_bloch(const SystemParams& p, const BlochState& s0, double t_end,
                           const IntegratorConfig& cfg = {},
                           const std::vector<double>& sample_times = {});

/// Integrate the master equation; states are rho flattened to 8 reals
/// (row-major, re/im interleaved).
Trajectory integrate_lindblad(const SystemParams& p, const DensityMatrix& rho0,
                              double t_end, const IntegratorConfig& cfg = {},
                              const std::vector<double>& sample_times = {});

Eigen::VectorXd density_to_vec(const DensityMatrix& rho);
DensityMatrix density_from_vec(const Eigen::VectorXd& v);

}  // namespace srbloch
