#pragma once

#include <Eigen/Dense>
#include <numbers>

#include "srbloch/errors.hpp"

namespace srbloch {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Convert an ordinary frequency in Hz to angular frequency in rad/s.
inline double hz_to_rad(double hz) { return two_pi * hz; }
inline double rad_to_hz(double rad) { return rad / two_pi; }

/// Drive and relaxation parameters of the driven two-level system.
/// All frequencies are angular (rad/s); times in seconds.
struct SystemParams {
    double omega0 = 0.0;       ///< Larmor frequency (level splitting), >= 0
    double omega1 = 0.0;       ///< Rabi frequency (drive strength), >= 0
    double omega_drive = 0.0;  ///< drive frequency Omega
    double t1 = 1.0;           ///< longitudinal relaxation time, > 0
    double t2 = 1.0;           ///< transverse relaxation time, > 0
    double s_eq = 0.0;         ///< equilibrium population difference, |s_eq| <= 1
    bool weak_drive = false;   ///< set by validate_params: 2*omega1 < 0.01*omega0

    /// Detuning Delta = omega0 - Omega.
    double detuning() const { return omega0 - omega_drive; }
};

/// Lab-frame Bloch vector, s_i = <sigma_i>.
struct BlochState {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;

    double norm() const { return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3); }
};

/// Rotating-frame Bloch vector (u,v,w), anchored at reference phase Omega*t.
struct RotatingState {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    double phase = 0.0;  ///< Omega*t at which the frame is anchored

    double norm() const { return std::sqrt(u * u + v * v + w * w); }
};

/// 2x2 density matrix; Hermitian, unit trace.
using DensityMatrix = Eigen::Matrix2cd;

/// 3x3 relaxation (Kossakowski) matrix A = {a_kl}.
using RelaxationMatrix = Eigen::Matrix3cd;

/// Pauli matrices sigma_1, sigma_2, sigma_3.
const Eigen::Matrix2cd& pauli(int i);

inline constexpr double kBlochBallTol = 1e-9;
inline constexpr double kHermitianTol = 1e-12;

/// Checks all SystemParams invariants and computes the weak-drive flag.
/// Throws NonPositiveTime, T2Bound, or BlochBound. Returns the validated
/// params with weak_drive set.
SystemParams validate_params(const SystemParams& raw);

/// Relaxation matrix of the Bloch parametrization:
///   a11 = a22 = 1/(2 T1),  a33 = 1/T2 - 1/(2 T1),
///   a12 = conj(a21) = i s_eq / (sqrt(2) T1),
/// all other entries zero. Expects validated params.
RelaxationMatrix relaxation_matrix(const SystemParams& p);

struct PsdReport {
    bool is_psd = false;
    double min_eigenvalue = 0.0;
};

/// Smallest eigenvalue of a Hermitian matrix; is_psd iff it is >= -tol.
/// Throws NotHermitian if the input fails the Hermiticity check.
PsdReport psd_check(const RelaxationMatrix& a, double tol = kHermitianTol);

/// rho = (1 + s.sigma)/2
DensityMatrix bloch_to_density(const BlochState& s);

/// Inverse of bloch_to_density; throws InvalidDensity on non-Hermitian or
/// non-unit-trace input.
BlochState density_to_bloch(const DensityMatrix& rho);

/// NMR mapping: omega0 = gamma*B0, omega1 = gamma*B1, s_eq = M0.
/// Drive is taken on resonance (omega_drive = omega0).
SystemParams params_from_nmr(double gamma, double b0, double b1, double t1,
                             double t2, double m0);

}  // namespace srbloch
