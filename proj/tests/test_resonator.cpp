// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "constants.hpp"
#include "errors.hpp"
#include "resonator.hpp"
#include "test_support.hpp"

using namespace fluxdec;
using testsupport::rel_err;

namespace {

SquidParams default_squid() {
    SquidParams sq;
    sq.ic = 2e-6;
    sq.lg = 60e-12;
    sq.phi_r = 0.0;
    return sq;
}

ResonatorParams default_resonator() {
    ResonatorParams r;
    r.omega_r = kTwoPi * 7.89e9;
    r.kappa = kTwoPi * 1.22e7;
    r.z0 = 50.0;
    r.vph = 1.2e8;
    r.length = kPi * 1.2e8 / (2.0 * kTwoPi * 7.89e9);  // lambda/4
    r.m_qr = 14e-12;
    return r;
}

// Classical rf-SQUID potential, for the grid-scan oracle.
double potential(const SquidParams& sq, double phi, double i_b) {
    const double red = kPhi0 / kTwoPi;
    return -sq.ic * red * std::cos(phi) +
           red * red * (phi - kTwoPi * sq.phi_r) * (phi - kTwoPi * sq.phi_r) /
               (2.0 * sq.lg) -
           red * i_b * phi;
}

}  // namespace

TEST_SUITE("resonator") {

TEST_CASE("squid_minimize at the symmetric point") {
    const SquidParams sq = default_squid();
    CHECK(std::abs(squid_minimize(sq, 0.0)) < 1e-12);
}

TEST_CASE("squid_minimize odd around phi_r = 0.5") {
    SquidParams sq = default_squid();
    for (double dq : {0.01, 0.05, 0.12}) {
        sq.phi_r = 0.5 + dq;
        const double up = squid_minimize(sq, 0.0);
        sq.phi_r = 0.5 - dq;
        const double dn = squid_minimize(sq, 0.0);
        CHECK(up - kPi == doctest::Approx(-(dn - kPi)).epsilon(1e-10));
    }
    sq.phi_r = 0.5;
    CHECK(squid_minimize(sq, 0.0) == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("squid_minimize gradient residual and grid-scan oracle") {
    SquidParams sq = default_squid();
    sq.phi_r = 0.23;
    for (double i_b : {0.0, 2e-8, -5e-8}) {
        const double phi = squid_minimize(sq, i_b);
        // Residual of the stationarity condition, relative to the force scale.
        const double g = sq.ic * std::sin(phi) +
                         (kPhi0 / kTwoPi) * (phi - kTwoPi * sq.phi_r) / sq.lg - i_b;
        CHECK(std::abs(g) < 1e-10 * sq.ic);
        // Dense scan around the bracket agrees within the grid pitch.
        double best = phi, best_u = potential(sq, phi, i_b);
        const double pitch = 1e-4;
        for (double x = phi - 1.0; x <= phi + 1.0; x += pitch) {
            const double u = potential(sq, x, i_b);
            if (u < best_u) {
                best_u = u;
                best = x;
            }
        }
        CHECK(std::abs(best - phi) <= pitch);
    }
}

TEST_CASE("branch is continuous over a phi_r sweep") {
    SquidParams sq = default_squid();
    double prev = squid_minimize(sq, 0.0);
    for (int i = 1; i <= 1000; ++i) {
        sq.phi_r = i * 1e-3;
        const double phi = squid_minimize(sq, 0.0);
        CHECK(std::abs(phi - prev) < kPi / 100.0);
        prev = phi;
    }
}

TEST_CASE("screening_taylor symmetry and limits") {
    SUBCASE("flux-symmetric point: no screening current, no quadratic term") {
        const SquidParams sq = default_squid();
        const ScreeningTaylor t = screening_taylor(sq);
        CHECK(std::abs(t.i_g0) < 1e-12 * sq.ic);
        CHECK(std::abs(t.r2) * sq.ic / t.r1 < 1e-8);
        // r1 = 1/(1 + beta_L) at phi_J = 0.
        CHECK(t.r1 == doctest::Approx(1.0 / (1.0 + sq.beta_l())).epsilon(1e-8));
    }
    SUBCASE("open-junction limit: all bias current flows through Lg") {
        SquidParams sq = default_squid();
        sq.ic = 1e-12;
        const ScreeningTaylor t = screening_taylor(sq);
        CHECK(t.r1 == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("cubic remainder shrinks ~8x when the probe current halves") {
        SquidParams sq = default_squid();
        sq.phi_r = 0.18;
        const ScreeningTaylor t = screening_taylor(sq);
        const auto i_g = [&](double i_b) {
            return (squid_minimize(sq, i_b) - kTwoPi * sq.phi_r) * (kPhi0 / kTwoPi) /
                   sq.lg;
        };
        const auto remainder = [&](double i_b) {
            return std::abs(i_g(i_b) - (t.i_g0 + t.r1 * i_b + t.r2 * i_b * i_b));
        };
        const double x = 0.1 * sq.ic;
        const double ratio = remainder(x) / remainder(0.5 * x);
        CHECK(ratio > 5.0);
        CHECK(ratio < 12.0);
    }
}

TEST_CASE("effective inductance from the potential curvature") {
    const SquidParams sq = default_squid();
    const double phi = squid_minimize(sq, 0.0);
    const double l_sq = squid_effective_inductance(sq, phi);
    // Parallel combination of Lg and the junction inductance at phi_J = 0.
    CHECK(l_sq == doctest::Approx(sq.lg / (1.0 + sq.beta_l())).epsilon(1e-12));
}

TEST_CASE("zero-point current") {
    const ResonatorParams res = default_resonator();
    SUBCASE("L_sq -> 0 limit") {
        const double expected = std::sqrt(res.vph * kHbar * res.omega_r / (res.length * res.z0));
        CHECK(rel_err(zero_point_current(res, 0.0), expected) < 1e-12);
    }
    SUBCASE("monotone decreasing in L_sq") {
        double prev = zero_point_current(res, 0.0);
        for (double l = 1e-11; l < 2e-10; l += 1e-11) {
            const double v = zero_point_current(res, l);
            CHECK(v < prev);
            CHECK(v > 0.0);
            prev = v;
        }
    }
    SUBCASE("representative arithmetic with the lambda/4 length") {
        // Independent evaluation of the closed form at L_sq = 44 pH.
        const double l_sq = 4.4e-11;
        const double num = res.vph * kHbar * res.omega_r * res.z0;
        const double den = res.vph * l_sq * res.z0 +
                           res.length * (l_sq * l_sq * res.omega_r * res.omega_r +
                                         res.z0 * res.z0);
        CHECK(rel_err(zero_point_current(res, l_sq), std::sqrt(num / den)) < 1e-14);
        CHECK(zero_point_current(res, l_sq) == doctest::Approx(5.66e-8).epsilon(0.01));
        // lambda/4 consistency of the configured length.
        CHECK(res.length == doctest::Approx(kPi * res.vph / (2.0 * res.omega_r))
                                .epsilon(1e-12));
    }
}

TEST_CASE("qubit-resonator coupling") {
    const ResonatorParams res = default_resonator();
    const QubitCurves curves = testsupport::default_curves();
    const SquidParams sq = default_squid();
    const double phi = squid_minimize(sq, 0.0);
    const double l_sq = squid_effective_inductance(sq, phi);
    const double i_b0 = zero_point_current(res, l_sq);
    const double r1 = screening_taylor(sq).r1;

    SUBCASE("vanishing transverse element kills the coupling") {
        QubitPoint p{};
        p.mz_ge = 0.0;
        CHECK(qubit_resonator_coupling(p, res, r1, i_b0) == 0.0);
    }
    SUBCASE("linear in the mutual") {
        const QubitPoint p =
            compute_point(curves, {symmetry_point(curves, 0.32), 0.32});
        ResonatorParams res2 = res;
        res2.m_qr *= 2.0;
        CHECK(rel_err(qubit_resonator_coupling(p, res2, r1, i_b0),
                      2.0 * qubit_resonator_coupling(p, res, r1, i_b0)) < 1e-14);
    }
    SUBCASE("paper-scale sweep stays within the expected band") {
        for (double phi_x = 0.27; phi_x <= 0.431; phi_x += 0.02) {
            const QubitPoint p =
                compute_point(curves, {symmetry_point(curves, phi_x), phi_x});
            const double g = qubit_resonator_coupling(p, res, r1, i_b0);
            CHECK(g > kTwoPi * 100e6);
            CHECK(g < kTwoPi * 200e6);
        }
    }
}

TEST_CASE("multivalued regime is rejected") {
    SquidParams sq = default_squid();
    sq.ic = 2e-5;  // beta_L ~ 3.6
    sq.phi_r = 0.5;
    CHECK(sq.beta_l() > 1.0);
    CHECK_THROWS_AS(squid_minimize(sq, 0.0), ConvergenceError);
}

}  // TEST_SUITE
