#include "srbloch/pulse_sim.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace srbloch {

using std::numbers::pi;

IsochromatEnsemble IsochromatEnsemble::gaussian(double sigma_rad, std::size_t n) {
    IsochromatEnsemble ens;
    if (sigma_rad <= 0.0 || n == 1) {
        ens.offsets = {0.0};
        ens.weights = {1.0};
        return ens;
    }
    ens.offsets.resize(n);
    ens.weights.resize(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -3.0 + 6.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        ens.offsets[i] = x * sigma_rad;
        ens.weights[i] = std::exp(-0.5 * x * x);
        wsum += ens.weights[i];
    }
    for (double& w : ens.weights) w /= wsum;
    return ens;
}

void IsochromatEnsemble::validate() const {
    if (offsets.empty() || offsets.size() != weights.size()) {
        throw ValidationError("isochromat ensemble: offsets/weights mismatch");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ValidationError("isochromat ensemble: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw ValidationError("isochromat ensemble: weights must sum to 1");
    }
}

BlochState apply_hard_pulse(const BlochState& s, double angle, double phase) {
    const Eigen::Vector3d axis(std::cos(phase), std::sin(phase), 0.0);
    const Eigen::Vector3d v(s.s1, s.s2, s.s3);
    const Eigen::Vector3d r = Eigen::AngleAxisd(angle, axis) * v;
    return {r[0], r[1], r[2]};
}

PulseEvent PulseEvent::hard_pulse(double angle, double phase) {
    if (angle < 0.0 || angle >= 2.0 * pi) {
        throw ValidationError("hard pulse: flip angle must be in [0, 2*pi)");
    }
    PulseEvent e;
    e.kind = Kind::HardPulse;
    e.flip_angle = angle;
    e.phase = phase;
    return e;
}

PulseEvent PulseEvent::delay(double duration) {
    if (duration < 0.0) throw ValidationError("delay: duration must be >= 0");
    PulseEvent e;
    e.kind = Kind::Delay;
    e.duration = duration;
    return e;
}

PulseEvent PulseEvent::acquire() {
    PulseEvent e;
    e.kind = Kind::Acquire;
    return e;
}

AcquisitionRecord run_sequence(const SystemParams& p,
                               const std::vector<PulseEvent>& events,
                               const IntegratorConfig& cfg) {
    SystemParams free = p;
    free.omega1 = 0.0;  // drive off during delays
    BlochState s{0.0, 0.0, p.s_eq};
    double elapsed = 0.0;
    AcquisitionRecord rec;
    for (const PulseEvent& e : events) {
        switch (e.kind) {
            case PulseEvent::Kind::HardPulse:
                s = apply_hard_pulse(s, e.flip_angle, e.phase);
                break;
            case PulseEvent::Kind::Delay: {
                if (e.duration > 0.0) {
                    const Trajectory traj =
                        integrate_rotating(free, 0.0, {s.s1, s.s2, s.s3, 0.0},
                                           e.duration, cfg);
                    const Eigen::Vector3d v = traj.y.back().head<3>();
                    s = {v[0], v[1], v[2]};
                    elapsed += e.duration;
                }
                break;
            }
            case PulseEvent::Kind::Acquire:
                rec.times.push_back(elapsed);
                rec.values.push_back(s.s3);
                break;
        }
    }
    return rec;
}

AcquisitionRecord inversion_recovery(const SystemParams& p,
                                     const std::vector<double>& delays) {
    AcquisitionRecord rec;
    for (double tau : delays) {
        if (tau < 0.0) throw ValidationError("inversion_recovery: delay must be >= 0");
        const std::vector<PulseEvent> seq = {
            PulseEvent::hard_pulse(pi, 0.0),
            PulseEvent::delay(tau),
            PulseEvent::acquire(),
        };
        const AcquisitionRecord one = run_sequence(p, seq);
        rec.times.push_back(tau);
        rec.values.push_back(one.values.front());
    }
    return rec;
}

T1Fit fit_t1(const AcquisitionRecord& rec) {
    const std::size_t n = rec.times.size();
    if (n < 4 || rec.values.size() != n) {
        throw InsufficientSpan("fit_t1: need >= 4 samples");
    }
    // Initial guess: m0 from the longest delay, t1 from the span.
    double m0 = rec.values.back();
    if (std::abs(m0) < 1e-12) m0 = 1.0;
    double t1 = 0.5 * (rec.times.back() - rec.times.front());
    if (t1 <= 0.0) throw InsufficientSpan("fit_t1: degenerate delay span");

    Eigen::VectorXd r(n);
    Eigen::MatrixXd jac(n, 2);
    double lambda = 1e-3;
    auto residuals = [&](double m, double t, Eigen::VectorXd& out) {
        double ssq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-rec.times[i] / t);
            out[static_cast<Eigen::Index>(i)] = rec.values[i] - m * (1.0 - 2.0 * e);
            ssq += out[static_cast<Eigen::Index>(i)] * out[static_cast<Eigen::Index>(i)];
        }
        return ssq;
    };
    double ssq = residuals(m0, t1, r);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            const double e = std::exp(-rec.times[i] / t1);
            jac(static_cast<Eigen::Index>(i), 0) = -(1.0 - 2.0 * e);
            jac(static_cast<Eigen::Index>(i), 1) =
                2.0 * m0 * rec.times[i] * e / (t1 * t1);
        }
        const Eigen::Matrix2d jtj = jac.transpose() * jac;
        const Eigen::Vector2d jtr = jac.transpose() * r;
        Eigen::Matrix2d damped = jtj;
        damped.diagonal() += lambda * jtj.diagonal();
        const Eigen::Vector2d delta = damped.ldlt().solve(-jtr);
        if (!delta.allFinite()) throw FitDiverged("fit_t1: singular normal equations");
        const double m_new = m0 + delta[0];
        const double t_new = t1 + delta[1];
        if (!(t_new > 0.0) || !std::isfinite(t_new) || !std::isfinite(m_new)) {
            lambda *= 10.0;
            if (lambda > 1e12) throw FitDiverged("fit_t1: damping overflow");
            continue;
        }
        Eigen::VectorXd r_new(n);
        const double ssq_new = residuals(m_new, t_new, r_new);
        if (ssq_new < ssq) {
            const bool small =
                std::abs(delta[0]) < 1e-10 * std::max(1.0, std::abs(m0)) &&
                std::abs(delta[1]) < 1e-10 * std::abs(t1);
            m0 = m_new;
            t1 = t_new;
            r = r_new;
            ssq = ssq_new;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (small) {
                converged = true;
                break;
            }
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) {
                // No descent direction left at roundoff level: stationary.
                converged = iter > 0;
                break;
            }
        }
    }
    if (!converged && ssq > 1e-6 * static_cast<double>(n)) {
        throw FitDiverged("fit_t1: no convergence");
    }
    if (rec.times.front() > 0.2 * t1 || rec.times.back() < 2.0 * t1) {
        throw InsufficientSpan("fit_t1: delays must span [0.2, 2] * T1");
    }
    return {t1, m0, std::sqrt(ssq)};
}

AcquisitionRecord carr_purcell(const SystemParams& p, const IsochromatEnsemble& ens,
                               double tau_echo, int n_echoes, bool refocus) {
    if (tau_echo <= 0.0) throw ValidationError("carr_purcell: tau_echo must be > 0");
    if (n_echoes < 2) throw ValidationError("carr_purcell: need >= 2 echoes");
    ens.validate();

    // Per-isochromat free evolution is closed-form: the transverse component
    // m = u + i v obeys m' = (-i*offset - 1/T2) m.
    const std::size_t ni = ens.offsets.size();
    std::vector<std::complex<double>> m(ni);
    // pi/2 pulse about x takes (0,0,s_eq) to (0,-s_eq,0).
    BlochState after = apply_hard_pulse({0.0, 0.0, p.s_eq}, pi / 2.0, 0.0);
    for (auto& mi : m) mi = {after.s1, after.s2};

    AcquisitionRecord rec;
    const double decay = std::exp(-tau_echo / p.t2);
    for (int echo = 1; echo <= n_echoes; ++echo) {
        for (std::size_t i = 0; i < ni; ++i) {
            const std::complex<double> rot =
                std::exp(std::complex<double>(0.0, -ens.offsets[i] * tau_echo));
            m[i] *= rot * decay;
            if (refocus) m[i] = std::conj(m[i]);  // pi pulse about x
            m[i] *= rot * decay;
        }
        std::complex<double> mean = 0.0;
        for (std::size_t i = 0; i < ni; ++i) mean += ens.weights[i] * m[i];
        rec.times.push_back(2.0 * echo * tau_echo);
        rec.values.push_back(std::abs(mean));
    }
    return rec;
}

T2Fit fit_t2(const AcquisitionRecord& rec) {
    const std::size_t n = rec.times.size();
    if (n < 3 || rec.values.size() != n) {
        throw InsufficientSpan("fit_t2: need >= 3 echo amplitudes");
    }
    Eigen::MatrixXd x(n, 2);
    Eigen::VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rec.values[i] <= 0.0) {
            throw NonPositiveAmplitude("fit_t2: log of non-positive amplitude");
        }
        x(static_cast<Eigen::Index>(i), 0) = 1.0;
        x(static_cast<Eigen::Index>(i), 1) = rec.times[i];
        y[static_cast<Eigen::Index>(i)] = std::log(rec.values[i]);
    }
    const Eigen::Vector2d beta = (x.transpose() * x).ldlt().solve(x.transpose() * y);
    if (!(beta[1] < 0.0)) throw FitDiverged("fit_t2: non-decaying amplitudes");
    const double resid = (y - x * beta).norm();
    return {-1.0 / beta[1], resid};
}

AcquisitionRecord long_pulse_response(const SystemParams& p, double duration,
                                      double readout_stride,
                                      const IntegratorConfig& cfg) {
    if (duration <= 0.0) throw ValidationError("long_pulse_response: duration must be > 0");
    if (readout_stride <= 0.0) {
        throw ValidationError("long_pulse_response: stride must be > 0");
    }
    std::vector<double> samples;
    for (double t = 0.0; t <= duration + 1e-15 * duration; t += readout_stride) {
        samples.push_back(std::min(t, duration));
    }
    const Trajectory traj =
        integrate_rotating(p, 0.0, {0.0, 0.0, p.s_eq, 0.0}, duration, cfg, samples);
    AcquisitionRecord rec;
    rec.times = traj.t;
    rec.values.resize(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        rec.values[i] = std::hypot(traj.y[i][0], traj.y[i][1]);
    }
    return rec;
}

AcquisitionRecord add_noise(const AcquisitionRecord& rec, double sigma,
                            std::uint64_t seed) {
    AcquisitionRecord out = rec;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (double& v : out.values) v += dist(rng);
    out.noise_seed = seed;
    out.noise_sigma = sigma;
    return out;
}

}  // namespace srbloch
