#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "srbloch/core.hpp"
#include "srbloch/dynamics.hpp"

namespace srbloch {

/// Sampled protocol output. `values` are dimensionless magnetization
/// components or transverse magnitudes, depending on the protocol.
struct AcquisitionRecord {
    std::vector<double> times;
    std::vector<double> values;
    std::optional<std::uint64_t> noise_seed;
    double noise_sigma = 0.0;
};

/// Static frequency offsets with weights summing to 1; models
/// inhomogeneous broadening.
struct IsochromatEnsemble {
    std::vector<double> offsets;  ///< rad/s
    std::vector<double> weights;

    /// 21-point Gaussian-weighted grid of half-width 3*sigma. sigma = 0
    /// yields the single on-resonance isochromat.
    static IsochromatEnsemble gaussian(double sigma_rad, std::size_t n = 21);
    void validate() const;
};

/// One element of a pulse sequence. Pulses are idealized instantaneous
/// rotations; delays are drive-free evolution; acquire records the state.
struct PulseEvent {
    enum class Kind { HardPulse, Delay, Acquire };
    Kind kind = Kind::Delay;
    double flip_angle = 0.0;  ///< rad, in [0, 2*pi)
    double phase = 0.0;       ///< rad, axis in the transverse plane
    double duration = 0.0;    ///< s, for delay/acquire

    static PulseEvent hard_pulse(double angle, double phase);
    static PulseEvent delay(double duration);
    static PulseEvent acquire();
};

/// Run a sequence on a single on-resonance spin starting from equilibrium.
/// Each Acquire event appends (elapsed time, s3) to the record; delays are
/// integrated numerically with the drive off.
AcquisitionRecord run_sequence(const SystemParams& p,
                               const std::vector<PulseEvent>& events,
                               const IntegratorConfig& cfg = {});

/// Instantaneous rotation of the Bloch vector by `angle` about the
/// transverse axis (cos phase, sin phase, 0), right-hand rule. A pi/2 pulse
/// of phase 0 maps (0,0,1) to (0,-1,0).
BlochState apply_hard_pulse(const BlochState& s, double angle, double phase);

/// Inversion recovery: pi pulse from equilibrium, free evolution for each
/// delay, record s3. Closed form s3(tau) = s_eq (1 - 2 exp(-tau/T1)).
AcquisitionRecord inversion_recovery(const SystemParams& p,
                                     const std::vector<double>& delays);

struct T1Fit {
    double t1_hat = 0.0;
    double m0_hat = 0.0;
    double residual_norm = 0.0;
};

/// Nonlinear least squares (Levenberg-Marquardt) for
/// M_z(tau) = M0 (1 - 2 exp(-tau/T1)).
/// Throws FitDiverged or InsufficientSpan.
T1Fit fit_t1(const AcquisitionRecord& rec);

/// Carr-Purcell echo train: pi/2 pulse, then n_echoes blocks of
/// [tau, pi pulse, tau, record |ensemble-mean transverse|]. With
/// refocus=false the pi pulses are omitted (free-induction decay).
AcquisitionRecord carr_purcell(const SystemParams& p, const IsochromatEnsemble& ens,
                               double tau_echo, int n_echoes, bool refocus = true);

struct T2Fit {
    double t2_hat = 0.0;
    double residual_norm = 0.0;
};

/// Log-linear least squares on echo amplitudes, model A(t) = A0 exp(-t/T2).
/// Throws NonPositiveAmplitude or InsufficientSpan.
T2Fit fit_t2(const AcquisitionRecord& rec);

/// Resonant cw drive from equilibrium in the rotating frame; records
/// sqrt(u^2 + v^2) every `readout_stride` seconds up to `duration`.
AcquisitionRecord long_pulse_response(const SystemParams& p, double duration,
                                      double readout_stride,
                                      const IntegratorConfig& cfg = {});

/// Deterministic additive Gaussian measurement noise.
AcquisitionRecord add_noise(const AcquisitionRecord& rec, double sigma,
                            std::uint64_t seed);

}  // namespace srbloch
