#include "srbloch/sr_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "srbloch/steady_state.hpp"

namespace srbloch {

std::string control_name(SweepControl c) {
    switch (c) {
        case SweepControl::T12: return "t12";
        case SweepControl::Omega1: return "omega1";
        case SweepControl::T1: return "t1";
        case SweepControl::T2: return "t2";
        case SweepControl::Detuning: return "detuning";
    }
    return "?";
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw EmptyGrid("sweep: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] <= grid[i - 1]) {
            throw ValidationError("sweep: grid must be strictly increasing");
        }
    }
    if (grid.front() <= 0.0) throw ValidationError("sweep: grid must be positive");
}

// Golden-section maximization on [a, b], terminating at relative width 1e-12.
double golden_max(const std::function<double(double)>& f, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while ((b - a) > 1e-12 * (std::abs(a) + std::abs(b))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

SweepResult make_sweep(SweepControl control, const std::vector<double>& grid,
                       const std::function<double(double)>& f) {
    check_grid(grid);
    SweepResult r;
    r.control = control;
    r.grid = grid;
    r.response.resize(grid.size());
    std::size_t imax = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.response[i] = f(grid[i]);
        if (r.response[i] > r.response[imax]) imax = i;
    }
    // Interior maximum only; boundary maxima mean the peak sits outside the
    // grid (or the curve is monotone/flat).
    if (imax > 0 && imax + 1 < grid.size() && r.response[imax] > 0.0) {
        const double loc = golden_max(f, grid[imax - 1], grid[imax + 1]);
        r.extremum = {loc, f(loc), ExtremumKind::Max};
    } else {
        r.extremum = {0.0, 0.0, ExtremumKind::None};
    }
    return r;
}

double eta_t12(double omega1, double s_eq, double t12) {
    SystemParams p;
    p.omega1 = omega1;
    p.t1 = t12;
    p.t2 = t12;
    p.s_eq = s_eq;
    return eta_resonant(p);
}

}  // namespace

SweepResult sweep_t12(double omega1, double s_eq, const std::vector<double>& t12_grid) {
    return make_sweep(SweepControl::T12, t12_grid,
                      [&](double t12) { return eta_t12(omega1, s_eq, t12); });
}

SweepResult sweep_t2_constrained(double omega1, double s_eq, double k,
                                 const std::vector<double>& t2_grid) {
    if (k <= 0.0) throw ValidationError("sweep_t2_constrained: k must be positive");
    return make_sweep(SweepControl::T2, t2_grid, [&](double t2) {
        SystemParams p;
        p.omega1 = omega1;
        p.t1 = k * t2;
        p.t2 = t2;
        p.s_eq = s_eq;
        return eta_resonant(p);
    });
}

SrPeak find_sr_peak(double omega1, double s_eq) {
    if (omega1 <= 0.0) throw ZeroDrive("find_sr_peak: omega1 must be > 0");
    return {1.0 / omega1, 0.5 * s_eq};
}

SweepResult sweep_omega1(double t1, double t2, double s_eq,
                         const std::vector<double>& omega1_grid) {
    return make_sweep(SweepControl::Omega1, omega1_grid, [&](double w1) {
        SystemParams p;
        p.omega1 = w1;
        p.t1 = t1;
        p.t2 = t2;
        p.s_eq = s_eq;
        return eta_resonant(p);
    });
}

double linear_response_eta(const SystemParams& p) {
    return p.s_eq * p.omega1 * p.t1;
}

MonotonicityReport monotonicity_report(double omega1, double s_eq, SweepControl axis,
                                       double fixed_time,
                                       const std::vector<double>& grid) {
    check_grid(grid);
    std::vector<double> eta(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SystemParams p;
        p.omega1 = omega1;
        p.s_eq = s_eq;
        switch (axis) {
            case SweepControl::T1:
                p.t1 = grid[i];
                p.t2 = fixed_time;
                break;
            case SweepControl::T2:
                p.t1 = fixed_time;
                p.t2 = grid[i];
                break;
            case SweepControl::T12:
                p.t1 = grid[i];
                p.t2 = grid[i];
                break;
            default:
                throw ValidationError("monotonicity_report: axis must be t1, t2, or t12");
        }
        eta[i] = eta_resonant(p);
    }
    constexpr double tol = 1e-12;
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < eta.size(); ++i) {
        const double d = eta[i] - eta[i - 1];
        if (d <= tol) inc = false;
        if (d >= -tol) dec = false;
    }
    if (inc) return {true, Direction::Increasing};
    if (dec) return {true, Direction::Decreasing};
    return {false, Direction::NonMonotonic};
}

}  // namespace srbloch
