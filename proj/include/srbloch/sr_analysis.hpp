#pragma once

#include <string>
#include <vector>

#include "srbloch/core.hpp"

namespace srbloch {

enum class SweepControl { T12, Omega1, T1, T2, Detuning };

enum class ExtremumKind { Max, None };

struct Extremum {
    double location = 0.0;
    double value = 0.0;
    ExtremumKind kind = ExtremumKind::None;
};

/// One swept response curve: grid of the control parameter vs eta, with the
/// located extremum (grid scan + golden-section refinement).
struct SweepResult {
    SweepControl control = SweepControl::T12;
    std::vector<double> grid;      ///< strictly increasing, units of the control
    std::vector<double> response;  ///< eta, in [0, |s_eq|]
    Extremum extremum;
};

std::string control_name(SweepControl c);

/// Uniformly spaced grid helper, n >= 2 points in [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Response vs common relaxation time T12 (T1 = T2) at fixed drive.
/// Throws EmptyGrid.
SweepResult sweep_t12(double omega1, double s_eq, const std::vector<double>& t12_grid);

/// Generalized single-timescale sweep with the constraint T1 = k*T2; the
/// grid is in T2. k = 1 recovers sweep_t12. Peak at T2* = 1/(omega1 sqrt(k)).
SweepResult sweep_t2_constrained(double omega1, double s_eq, double k,
                                 const std::vector<double>& t2_grid);

struct SrPeak {
    double t12_star = 0.0;  ///< 1/omega1
    double eta_star = 0.0;  ///< s_eq/2
};

/// Closed-form SR peak location and height for T1 = T2.
/// Throws ZeroDrive when omega1 = 0.
SrPeak find_sr_peak(double omega1, double s_eq = 1.0);

/// Response vs drive amplitude at fixed T1, T2; optimum at
/// omega1* = 1/sqrt(T1 T2), peak value s_eq*sqrt(T2/T1)/2.
SweepResult sweep_omega1(double t1, double t2, double s_eq,
                         const std::vector<double>& omega1_grid);

/// First-order (linear-response) approximation eta ~ s_eq*omega1*T12.
/// Requires T1 = T2.
double linear_response_eta(const SystemParams& p);

enum class Direction { Increasing, Decreasing, NonMonotonic };

struct MonotonicityReport {
    bool is_monotonic = false;
    Direction direction = Direction::NonMonotonic;
};

/// Sign pattern of successive differences of eta along one relaxation axis
/// with the other held fixed.
MonotonicityReport monotonicity_report(double omega1, double s_eq, SweepControl axis,
                                       double fixed_time,
                                       const std::vector<double>& grid);

}  // namespace srbloch
