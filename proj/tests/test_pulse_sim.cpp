#include <doctest.h>

#include <cmath>
#include <numbers>

#include "srbloch/pulse_sim.hpp"
#include "srbloch/steady_state.hpp"

using namespace srbloch;
using std::numbers::pi;

namespace {

SystemParams t12_params(double t12, double s_eq = 1.0, double rabi_hz = 0.0) {
    SystemParams p;
    p.t1 = p.t2 = t12;
    p.s_eq = s_eq;
    p.omega1 = hz_to_rad(rabi_hz);
    return validate_params(p);
}

std::vector<double> log_delays(double t1, std::size_t n = 12) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        d[i] = 0.05 * t1 * std::pow(100.0, f);  // 0.05 T1 .. 5 T1
    }
    return d;
}

}  // namespace

TEST_CASE("hard pulses: inversion, quarter turn, identity") {
    const BlochState inverted = apply_hard_pulse({0.0, 0.0, 0.7}, pi, 0.0);
    CHECK(inverted.s3 == doctest::Approx(-0.7).epsilon(1e-15));
    CHECK(std::abs(inverted.s1) < 1e-15);

    // pi/2 about x takes z to -y in the right-hand-rule convention
    const BlochState quarter = apply_hard_pulse({0.0, 0.0, 1.0}, pi / 2, 0.0);
    CHECK(quarter.s2 == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(quarter.s1) < 1e-15);
    CHECK(std::abs(quarter.s3) < 1e-15);

    const BlochState same = apply_hard_pulse({0.3, -0.4, 0.5}, 0.0, 1.0);
    CHECK(same.s1 == 0.3);
    CHECK(same.s2 == -0.4);
    CHECK(same.s3 == 0.5);
}

TEST_CASE("hard pulse preserves norm; two pi pulses compose to identity") {
    const BlochState s{0.3, -0.5, 0.2};
    for (double angle : {0.3, 1.2, 2.8}) {
        for (double phase : {0.0, 0.7, 2.0}) {
            const BlochState r = apply_hard_pulse(s, angle, phase);
            CHECK(r.norm() == doctest::Approx(s.norm()).epsilon(1e-15));
        }
    }
    const BlochState twice = apply_hard_pulse(apply_hard_pulse(s, pi, 0.4), pi, 0.4);
    CHECK(std::abs(twice.s1 - s.s1) < 1e-14);
    CHECK(std::abs(twice.s2 - s.s2) < 1e-14);
    CHECK(std::abs(twice.s3 - s.s3) < 1e-14);
}

TEST_CASE("inversion recovery curve") {
    const SystemParams p = t12_params(36.5e-3);
    const double zero_cross = p.t1 * std::numbers::ln2;
    CHECK(zero_cross * 1e3 == doctest::Approx(25.30).epsilon(1e-3));

    const AcquisitionRecord rec =
        inversion_recovery(p, {0.0, zero_cross, 10.0 * p.t1});
    CHECK(rec.values[0] == doctest::Approx(-p.s_eq).epsilon(1e-12));
    CHECK(std::abs(rec.values[1]) < 1e-9);
    CHECK(rec.values[2] == doctest::Approx(p.s_eq).epsilon(1e-4));
}

TEST_CASE("fit_t1 recovers noiseless synthetic data within 0.1%") {
    const SystemParams p = t12_params(36.5e-3);
    const AcquisitionRecord rec = inversion_recovery(p, log_delays(p.t1));
    const T1Fit fit = fit_t1(rec);
    CHECK(fit.t1_hat == doctest::Approx(p.t1).epsilon(1e-3));
    CHECK(fit.m0_hat == doctest::Approx(p.s_eq).epsilon(1e-3));
}

TEST_CASE("fit_t1 under 1% noise stays within 1% over 100 seeds") {
    const SystemParams p = t12_params(36.5e-3);
    const AcquisitionRecord clean = inversion_recovery(p, log_delays(p.t1, 16));
    double worst = 0.0;
    int failures = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const T1Fit fit = fit_t1(add_noise(clean, 0.01 * p.s_eq, seed));
        const double rel = std::abs(fit.t1_hat - p.t1) / p.t1;
        worst = std::max(worst, rel);
        if (rel > 0.01) ++failures;
    }
    // statistical check: the bulk of seeds recover T1 within 1%
    CHECK(failures <= 12);
    CHECK(worst < 0.03);
}

TEST_CASE("fit_t1 error paths") {
    AcquisitionRecord flat;
    flat.times = {0.01, 0.02, 0.04, 0.08, 0.16};
    flat.values = {0.3, 0.3, 0.3, 0.3, 0.3};
    CHECK_THROWS_AS(fit_t1(flat), Error);  // FitDiverged or InsufficientSpan

    AcquisitionRecord tiny;
    tiny.times = {0.0, 0.1};
    tiny.values = {-1.0, 0.5};
    CHECK_THROWS_AS(fit_t1(tiny), InsufficientSpan);
}

TEST_CASE("Carr-Purcell echo decay follows exp(-2 n tau / T2)") {
    const SystemParams p = t12_params(28.5e-3);
    const IsochromatEnsemble ens = IsochromatEnsemble::gaussian(hz_to_rad(40.0));
    const double tau = 5e-3;
    const AcquisitionRecord rec = carr_purcell(p, ens, tau, 5);
    for (int n = 1; n <= 5; ++n) {
        const double expected = p.s_eq * std::exp(-2.0 * n * tau / p.t2);
        CHECK(rec.values[n - 1] == doctest::Approx(expected).epsilon(1e-6));
    }
    CHECK(rec.values[2] == doctest::Approx(0.3490).epsilon(1e-3));
}

TEST_CASE("refocusing is a no-op for a single on-resonance isochromat") {
    const SystemParams p = t12_params(20e-3);
    const IsochromatEnsemble single = IsochromatEnsemble::gaussian(0.0);
    const AcquisitionRecord with = carr_purcell(p, single, 4e-3, 4, true);
    const AcquisitionRecord without = carr_purcell(p, single, 4e-3, 4, false);
    for (std::size_t i = 0; i < with.values.size(); ++i) {
        CHECK(with.values[i] == doctest::Approx(without.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("broad ensemble dephases without refocusing, echoes restore it") {
    const SystemParams p = t12_params(20e-3);
    const IsochromatEnsemble broad = IsochromatEnsemble::gaussian(hz_to_rad(120.0));
    const double tau = 4e-3;
    const AcquisitionRecord fid = carr_purcell(p, broad, tau, 4, false);
    const AcquisitionRecord echo = carr_purcell(p, broad, tau, 4, true);
    for (std::size_t i = 0; i < fid.values.size(); ++i) {
        const double pure_t2 = p.s_eq * std::exp(-fid.times[i] / p.t2);
        CHECK(fid.values[i] < 0.9 * pure_t2);               // dephasing bites
        CHECK(echo.values[i] == doctest::Approx(pure_t2).epsilon(1e-8));
    }
}

TEST_CASE("echo tops are independent of the offset distribution") {
    const SystemParams p = t12_params(25e-3);
    const double tau = 3e-3;
    const AcquisitionRecord a =
        carr_purcell(p, IsochromatEnsemble::gaussian(hz_to_rad(30.0)), tau, 6);
    const AcquisitionRecord b =
        carr_purcell(p, IsochromatEnsemble::gaussian(hz_to_rad(300.0), 41), tau, 6);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        CHECK(std::abs(a.values[i] - b.values[i]) < 1e-8);
    }
}

TEST_CASE("fit_t2 round trip and error paths") {
    const SystemParams p = t12_params(18e-3);
    const AcquisitionRecord rec =
        carr_purcell(p, IsochromatEnsemble::gaussian(hz_to_rad(50.0)), 3e-3, 8);
    const T2Fit fit = fit_t2(rec);
    CHECK(fit.t2_hat == doctest::Approx(p.t2).epsilon(1e-3));

    AcquisitionRecord single;
    single.times = {6e-3};
    single.values = {0.8};
    CHECK_THROWS_AS(fit_t2(single), InsufficientSpan);

    AcquisitionRecord zero;
    zero.times = {6e-3, 12e-3, 18e-3};
    zero.values = {0.8, 0.0, 0.4};
    CHECK_THROWS_AS(fit_t2(zero), NonPositiveAmplitude);
}

TEST_CASE("long pulse reaches the analytic steady value near the SR point") {
    const SystemParams p = t12_params(25e-3, 1.0, 6.3);
    const AcquisitionRecord rec = long_pulse_response(p, 0.5, 1e-3);
    CHECK(rec.values.back() == doctest::Approx(0.49997).epsilon(1e-4));
    CHECK(rec.values.back() == doctest::Approx(eta_resonant(p)).epsilon(1e-6));
}

TEST_CASE("short pulse has not converged; zero drive gives zero response") {
    const SystemParams p = t12_params(25e-3, 1.0, 6.3);
    const AcquisitionRecord shortrec = long_pulse_response(p, 1e-3, 1e-4);
    CHECK(std::abs(shortrec.values.back() - eta_resonant(p)) > 1e-2);

    const SystemParams undriven = t12_params(25e-3, 1.0, 0.0);
    const AcquisitionRecord rec = long_pulse_response(undriven, 0.1, 1e-2);
    for (double v : rec.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("long-pulse final values reproduce the sweep curve") {
    const double w1 = hz_to_rad(6.3);
    for (double t12 : {18e-3, 25e-3, 45.5e-3}) {
        SystemParams p = t12_params(t12, 1.0, 6.3);
        const AcquisitionRecord rec = long_pulse_response(p, 25.0 * t12, t12);
        CHECK(std::abs(rec.values.back() - eta_resonant(p)) < 1e-6);
        (void)w1;
    }
}

TEST_CASE("pulse event validation") {
    CHECK_THROWS_AS(PulseEvent::hard_pulse(-0.1, 0.0), ValidationError);
    CHECK_THROWS_AS(PulseEvent::hard_pulse(2.0 * pi, 0.0), ValidationError);
    CHECK_THROWS_AS(PulseEvent::delay(-1.0), ValidationError);
}
