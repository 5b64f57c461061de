#include "srbloch/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace srbloch {

using namespace std::complex_literals;

Eigen::Vector3d bloch_rhs(double t, const BlochState& s, const SystemParams& p) {
    const double drive = 2.0 * p.omega1 * std::cos(p.omega_drive * t);
    Eigen::Vector3d ds;
    ds[0] = p.omega0 * s.s2 - s.s1 / p.t2;
    ds[1] = -p.omega0 * s.s1 - s.s2 / p.t2 + drive * s.s3;
    ds[2] = -drive * s.s2 - (s.s3 - p.s_eq) / p.t1;
    return ds;
}

DensityMatrix lindblad_rhs(double t, const DensityMatrix& rho, const SystemParams& p) {
    // Sign of the coherent term follows the precession convention of
    // bloch_rhs (s1' = +omega0 s2).
    const Eigen::Matrix2cd h = 0.5 * p.omega0 * pauli(3) +
                               p.omega1 * std::cos(p.omega_drive * t) * pauli(1);
    DensityMatrix drho = 1i * (h * rho - rho * h);

    // Jump-operator form of the dissipator.  The relaxation matrix uses the
    // sqrt(2)-normalized operator basis, so its entries map onto raising /
    // lowering / dephasing rates as below; this reduction reproduces
    // bloch_rhs exactly (cross-checked to machine precision in the tests).
    const RelaxationMatrix a = relaxation_matrix(p);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double g_up = 0.5 * (a(0, 0).real() + a(1, 1).real()) + a(0, 1).imag() * inv_sqrt2;
    const double g_dn = 0.5 * (a(0, 0).real() + a(1, 1).real()) - a(0, 1).imag() * inv_sqrt2;
    const double g_ph = 0.5 * a(2, 2).real();

    static const Eigen::Matrix2cd sp = (Eigen::Matrix2cd() << 0, 1, 0, 0).finished();
    static const Eigen::Matrix2cd sm = (Eigen::Matrix2cd() << 0, 0, 1, 0).finished();
    const Eigen::Matrix2cd& sz = pauli(3);

    const std::pair<double, const Eigen::Matrix2cd*> channels[] = {
        {g_up, &sp}, {g_dn, &sm}, {g_ph, &sz}};
    for (const auto& [g, op] : channels) {
        if (g == 0.0) continue;
        const Eigen::Matrix2cd& l = *op;
        const Eigen::Matrix2cd ldl = l.adjoint() * l;
        drho += g * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
    return drho;
}

Eigen::Vector3d rotating_rhs(double /*t*/, const RotatingState& mu,
                             const SystemParams& p, double detuning) {
    Eigen::Vector3d dmu;
    dmu[0] = detuning * mu.v - mu.u / p.t2;
    dmu[1] = -detuning * mu.u - mu.v / p.t2 + p.omega1 * mu.w;
    dmu[2] = -p.omega1 * mu.v - (mu.w - p.s_eq) / p.t1;
    return dmu;
}

RotatingState lab_to_rotating(const BlochState& s, double t, double omega_drive) {
    const double phase = omega_drive * t;
    const double c = std::cos(phase), sn = std::sin(phase);
    RotatingState mu;
    mu.u = c * s.s1 - sn * s.s2;
    mu.v = sn * s.s1 + c * s.s2;
    mu.w = s.s3;
    mu.phase = phase;
    return mu;
}

BlochState rotating_to_lab(const RotatingState& mu, double t, double omega_drive) {
    const double phase = omega_drive * t;
    const double c = std::cos(phase), sn = std::sin(phase);
    BlochState s;
    s.s1 = c * mu.u + sn * mu.v;
    s.s2 = -sn * mu.u + c * mu.v;
    s.s3 = mu.w;
    return s;
}

Eigen::Vector3d to_vec(const BlochState& s) { return {s.s1, s.s2, s.s3}; }
Eigen::Vector3d to_vec(const RotatingState& mu) { return {mu.u, mu.v, mu.w}; }

BlochState bloch_from_vec(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

RotatingState rotating_from_vec(const Eigen::Vector3d& v, double phase) {
    return {v[0], v[1], v[2], phase};
}

Eigen::VectorXd density_to_vec(const DensityMatrix& rho) {
    Eigen::VectorXd v(8);
    int idx = 0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            v[idx++] = rho(r, c).real();
            v[idx++] = rho(r, c).imag();
        }
    }
    return v;
}

DensityMatrix density_from_vec(const Eigen::VectorXd& v) {
    DensityMatrix rho;
    int idx = 0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            rho(r, c) = {v[idx], v[idx + 1]};
            idx += 2;
        }
    }
    return rho;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Coefficients of the order-4 continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Cubic Hermite interpolation between (t0,y0,f0) and (t1,y1,f1).
Eigen::VectorXd hermite(double t, double t0, double t1, const Eigen::VectorXd& y0,
                        const Eigen::VectorXd& f0, const Eigen::VectorXd& y1,
                        const Eigen::VectorXd& f1) {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * f0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * f1;
}

double error_norm(const Eigen::VectorXd& err, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, double atol, double rtol) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / scale;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

Trajectory integrate(const Rhs& rhs, const Eigen::VectorXd& y0, double t0, double t1,
                     const IntegratorConfig& cfg,
                     const std::vector<double>& sample_times) {
    if (!(std::isfinite(t0) && std::isfinite(t1)) || t1 <= t0) {
        throw ValidationError("integrate: t_span must be finite with t1 > t0");
    }
    if (cfg.abs_tol <= 0.0 || cfg.rel_tol <= 0.0) {
        throw ValidationError("integrate: tolerances must be positive");
    }
    const double span = t1 - t0;
    const double max_step = cfg.max_step > 0.0 ? cfg.max_step : span / 10.0;

    Trajectory traj;
    auto next_sample = sample_times.cbegin();
    auto emit_dense = [&](double ta, double tb, const Eigen::VectorXd& ya,
                          const Eigen::VectorXd& fa, const Eigen::VectorXd& yb,
                          const Eigen::VectorXd& fb) {
        while (next_sample != sample_times.cend() && *next_sample <= tb + 1e-15 * span) {
            traj.t.push_back(*next_sample);
            traj.y.push_back(hermite(*next_sample, ta, tb, ya, fa, yb, fb));
            ++next_sample;
        }
    };
    auto record_step = [&](double t, const Eigen::VectorXd& y) {
        traj.t.push_back(t);
        traj.y.push_back(y);
    };

    double t = t0;
    Eigen::VectorXd y = y0;
    Eigen::VectorXd f = rhs(t, y);
    if (sample_times.empty()) record_step(t, y);

    if (cfg.method == Method::RungeKutta4) {
        const double h_req = cfg.init_step > 0.0 ? cfg.init_step : span / 1000.0;
        const long n = std::max<long>(1, std::lround(span / h_req));
        if (n > cfg.max_steps) throw MaxStepsExceeded("integrate: fixed-step count exceeds limit");
        const double h = span / static_cast<double>(n);
        for (long i = 0; i < n; ++i) {
            const Eigen::VectorXd k1 = f;
            const Eigen::VectorXd k2 = rhs(t + h / 2, y + (h / 2) * k1);
            const Eigen::VectorXd k3 = rhs(t + h / 2, y + (h / 2) * k2);
            const Eigen::VectorXd k4 = rhs(t + h, y + h * k3);
            const Eigen::VectorXd ynew = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
            const double tnew = t0 + (i + 1) * h;
            Eigen::VectorXd fnew = rhs(tnew, ynew);
            if (sample_times.empty()) record_step(tnew, ynew);
            else emit_dense(t, tnew, y, f, ynew, fnew);
            t = tnew;
            y = ynew;
            f.swap(fnew);
            ++traj.stats.steps_accepted;
        }
        traj.stats.final_step = h;
        return traj;
    }

    // Dormand-Prince 5(4), PI-free standard controller.
    double h = cfg.init_step;
    if (h <= 0.0) {
        const double d0 = y.norm(), d1 = f.norm();
        h = (d1 > 1e-300) ? 0.01 * std::max(d0, 1.0) / d1 : span * 1e-6;
    }
    h = std::min(h, max_step);

    Eigen::VectorXd k2v, k3v, k4v, k5v, k6v, k7v, ynew, err;
    while (t < t1) {
        if (traj.stats.steps_accepted + traj.stats.steps_rejected >= cfg.max_steps) {
            throw MaxStepsExceeded("integrate: max step count exceeded");
        }
        if (h < 1e-15 * span) {
            throw StepSizeUnderflow("integrate: step size underflow");
        }
        h = std::min(h, t1 - t);

        k2v = rhs(t + c2 * h, y + h * (a21 * f));
        k3v = rhs(t + c3 * h, y + h * (a31 * f + a32 * k2v));
        k4v = rhs(t + c4 * h, y + h * (a41 * f + a42 * k2v + a43 * k3v));
        k5v = rhs(t + c5 * h, y + h * (a51 * f + a52 * k2v + a53 * k3v + a54 * k4v));
        k6v = rhs(t + h, y + h * (a61 * f + a62 * k2v + a63 * k3v + a64 * k4v + a65 * k5v));
        ynew = y + h * (b1 * f + b3 * k3v + b4 * k4v + b5 * k5v + b6 * k6v);
        k7v = rhs(t + h, ynew);
        err = h * (e1 * f + e3 * k3v + e4 * k4v + e5 * k5v + e6 * k6v + e7 * k7v);

        const double en = error_norm(err, y, ynew, cfg.abs_tol, cfg.rel_tol);
        if (en <= 1.0) {
            const double tnew = t + h;
            if (sample_times.empty()) {
                record_step(tnew, ynew);
            } else {
                // Order-4 continuous extension over the accepted step.
                const Eigen::VectorXd dy = ynew - y;
                const Eigen::VectorXd cont3 = h * f - dy;
                const Eigen::VectorXd cont4 = dy - h * k7v - cont3;
                const Eigen::VectorXd cont5 =
                    h * (d1 * f + d3 * k3v + d4 * k4v + d5 * k5v + d6 * k6v + d7 * k7v);
                while (next_sample != sample_times.cend() &&
                       *next_sample <= tnew + 1e-15 * span) {
                    const double th = (*next_sample - t) / h;
                    traj.t.push_back(*next_sample);
                    traj.y.push_back(
                        y + th * (dy + (1.0 - th) * (cont3 + th * (cont4 + (1.0 - th) * cont5))));
                    ++next_sample;
                }
            }
            t = tnew;
            y.swap(ynew);
            f.swap(k7v);
            ++traj.stats.steps_accepted;
            traj.stats.final_step = h;
        } else {
            ++traj.stats.steps_rejected;
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(en, 1e-16), -0.2), 0.2, 5.0);
        h = std::min(h * factor, max_step);
    }
    // Samples past the last step (numerical endpoint slack).
    while (next_sample != sample_times.cend()) {
        traj.t.push_back(*next_sample);
        traj.y.push_back(y);
        ++next_sample;
    }
    return traj;
}

SteadyDetection detect_steady_state(const Trajectory& traj, double window, double eps) {
    if (traj.size() < 2) throw InsufficientSamples("detect_steady_state: empty trajectory");
    const double t_end = traj.t.back();
    std::size_t first = traj.size();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.t[i] >= t_end - window) {
            first = i;
            break;
        }
    }
    if (first + 2 > traj.size()) {
        throw InsufficientSamples("detect_steady_state: window holds < 2 samples");
    }
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(traj.y.back().size());
    for (std::size_t i = first; i < traj.size(); ++i) mean += traj.y[i];
    mean /= static_cast<double>(traj.size() - first);

    double max_change = 0.0;
    const Eigen::VectorXd& last = traj.y.back();
    for (std::size_t i = first; i < traj.size(); ++i) {
        max_change = std::max(max_change, (traj.y[i] - last).cwiseAbs().maxCoeff());
    }
    SteadyDetection det;
    det.converged = max_change < eps;
    det.steady = rotating_from_vec(mean.head<3>());
    return det;
}

Trajectory integrate_rotating(const SystemParams& p, double detuning,
                              const RotatingState& mu0, double t_end,
                              const IntegratorConfig& cfg,
                              const std::vector<double>& sample_times) {
    const Rhs rhs = [&p, detuning](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd {
        return rotating_rhs(t, rotating_from_vec(y.head<3>()), p, detuning);
    };
    return integrate(rhs, to_vec(mu0), 0.0, t_end, cfg, sample_times);
}

Trajectory integrate_bloch(const SystemParams& p, const BlochState& s0, double t_end,
                           const IntegratorConfig& cfg,
                           const std::vector<double>& sample_times) {
    const Rhs rhs = [&p](double t, const Eigen::VectorXd& y) -> Eigen::VectorXd {
        return bloch_rhs(t, bloch_from_vec(y.head<3>()), p);
    };
    return integrate(rhs, to_vec(s0), 0.0, t_end, cfg, sample_times);
}

Trajectory integrate_lindblad(const SystemParams& p, const DensityMatrix& rho0,
                              double t_end, const IntegratorConfig& cfg,
                              const std::vector<double>& sample_times) {
    const Rhs rhs = [&p](double t, const Eigen::VectorXd& y) {
        return density_to_vec(lindblad_rhs(t, density_from_vec(y), p));
    };
    return integrate(rhs, density_to_vec(rho0), 0.0, t_end, cfg, sample_times);
}

}  // namespace srbloch
