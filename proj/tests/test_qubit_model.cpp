// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "constants.hpp"
#include "qubit_model.hpp"
#include "test_support.hpp"

using namespace fluxdec;
using testsupport::rel_err;

TEST_SUITE("qubit_model") {

TEST_CASE("symmetry point basics") {
    CHECK(symmetry_point(0.069, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(symmetry_point(0.0, 0.37) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(symmetry_point(0.0, -0.21) == doctest::Approx(0.5).epsilon(1e-15));
    // Direct arithmetic: 0.5 + arctan(0.069 tan(0.4 pi)) / (2 pi).
    const double expected = 0.5 + std::atan(0.069 * std::tan(0.4 * kPi)) / kTwoPi;
    CHECK(symmetry_point(0.069, 0.40) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(symmetry_point(0.069, 0.40) == doctest::Approx(0.5333034).epsilon(1e-6));
    CHECK_THROWS_AS(symmetry_point(0.069, 0.5), std::domain_error);
    CHECK_THROWS_AS(symmetry_point(0.069, -0.62), std::domain_error);
}

TEST_CASE("symmetry point is odd around phi_x = 0 and monotone for d > 0") {
    double prev = symmetry_point(0.069, 0.0);
    for (int i = 1; i <= 40; ++i) {
        const double p = 0.49 * i / 40.0;
        const double s = symmetry_point(0.069, p);
        CHECK(s - 0.5 == doctest::Approx(-(symmetry_point(0.069, -p) - 0.5)).epsilon(1e-13));
        CHECK(s > prev);
        prev = s;
    }
}

TEST_CASE("symmetry point derivatives match finite differences") {
    const double d = 0.069;
    for (double p : {0.05, 0.21, 0.32, 0.44, -0.3}) {
        const double h = 1e-6;
        const double fd1 = (symmetry_point(d, p + h) - symmetry_point(d, p - h)) / (2 * h);
        const double fd2 = (symmetry_point(d, p + h) - 2 * symmetry_point(d, p) +
                            symmetry_point(d, p - h)) / (h * h);
        CHECK(rel_err(symmetry_point_deriv(d, p), fd1) < 1e-8);
        CHECK(std::abs(symmetry_point_deriv2(d, p) - fd2) <
              1e-3 * std::max(std::abs(fd2), 1.0));
    }
}

TEST_CASE("compute_point at the symmetry point") {
    const QubitCurves curves = testsupport::default_curves();
    const double phi_x = 0.34;
    const double sym = symmetry_point(curves, phi_x);
    const QubitPoint p = compute_point(curves, {sym, phi_x});
    CHECK(p.epsilon == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.omega01 == doctest::Approx(curves.delta(phi_x)).epsilon(1e-14));
    CHECK(p.d_omega_d_phi_z == doctest::Approx(0.0).epsilon(1e-12));
    // At a table node the interpolant reproduces the node value exactly.
    const double sym_node = symmetry_point(curves, 0.35);
    const QubitPoint pn = compute_point(curves, {sym_node, 0.35});
    CHECK(pn.omega01 == doctest::Approx(kTwoPi * 6.2e9 * std::exp(-14.045 * 0.05))
                            .epsilon(1e-14));
}

TEST_CASE("epsilon arithmetic against direct evaluation") {
    // Ip = 170 nA, 1 mPhi0 detuning: eps = 2 Ip Phi0 dphi / hbar ~ 6.67e9 rad/s.
    const QubitCurves curves = testsupport::default_curves();
    const double phi_x = 0.32;  // Ip(0.32) = 170 nA on this table
    const double sym = symmetry_point(curves, phi_x);
    const QubitPoint p = compute_point(curves, {sym + 1e-3, phi_x});
    const double expected = 2.0 * 1.7e-7 * kPhi0 * 1e-3 / kHbar;
    CHECK(p.epsilon == doctest::Approx(expected).epsilon(1e-9));
    CHECK(p.epsilon == doctest::Approx(6.6668e9).epsilon(1e-4));
}

TEST_CASE("persistent-current basis limit: matrix element vanishes as delta/omega -> 0") {
    const QubitCurves curves = testsupport::default_curves();
    const double phi_x = 0.27;
    const double sym = symmetry_point(curves, phi_x);
    const QubitPoint far = compute_point(curves, {sym + 0.02, phi_x});
    CHECK(far.omega01 == doctest::Approx(std::abs(far.epsilon)).epsilon(1e-2));
    CHECK(far.mz_ge < 0.1 * (curves.ip(phi_x) * kPhi0 / kHbar));
    const QubitPoint close = compute_point(curves, {sym, phi_x});
    CHECK(close.mz_ge == doctest::Approx(curves.ip(phi_x) * kPhi0 / kHbar).epsilon(1e-12));
}

TEST_CASE("reflection symmetries of omega01") {
    // (d, dphi_z) -> (-d, -dphi_z) at fixed phi_x, and
    // (phi_x, dphi_z) -> (-phi_x, -dphi_z) at fixed d, for even tables.
    const QubitCurves plus = testsupport::symmetric_curves(0.069);
    const QubitCurves minus = testsupport::symmetric_curves(-0.069);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> upx(-0.42, 0.42);
    std::uniform_real_distribution<double> udz(-0.01, 0.01);
    for (int i = 0; i < 64; ++i) {
        const double px = upx(rng);
        const double dz = udz(rng);
        const double w0 =
            compute_point(plus, {symmetry_point(plus, px) + dz, px}).omega01;
        const double w1 =
            compute_point(minus, {symmetry_point(minus, px) - dz, px}).omega01;
        CHECK(rel_err(w0, w1) < 1e-12);
        const double w2 =
            compute_point(plus, {symmetry_point(plus, -px) - dz, -px}).omega01;
        CHECK(rel_err(w0, w2) < 1e-12);
    }
}

TEST_CASE("d_omega_d_phi_z changes sign across the symmetry point") {
    const QubitCurves curves = testsupport::default_curves();
    for (double phi_x : {0.27, 0.32, 0.38, 0.43}) {
        const double sym = symmetry_point(curves, phi_x);
        const double left = compute_point(curves, {sym - 2e-3, phi_x}).d_omega_d_phi_z;
        const double right = compute_point(curves, {sym + 2e-3, phi_x}).d_omega_d_phi_z;
        CHECK(left < 0.0);
        CHECK(right > 0.0);
        CHECK(std::abs(compute_point(curves, {sym, phi_x}).d_omega_d_phi_z) < 1e-3);
    }
}

TEST_CASE("analytic sensitivities agree with finite differences") {
    const QubitCurves curves = testsupport::default_curves();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> upx(0.265, 0.435);
    std::uniform_real_distribution<double> udz(-8e-3, 8e-3);
    const double step = 1e-6;
    for (int i = 0; i < 50; ++i) {
        const double phi_x = upx(rng);
        const FluxBias bias{symmetry_point(curves, phi_x) + udz(rng), phi_x};
        const QubitPoint p = compute_point(curves, bias);
        // Richardson-extrapolated central differences as the oracle.
        const auto fd1 = sensitivities_fd(curves, bias, step);
        const auto fd2 = sensitivities_fd(curves, bias, 2.0 * step);
        const double dz = (4.0 * fd1.d_omega_d_phi_z - fd2.d_omega_d_phi_z) / 3.0;
        const double dx = (4.0 * fd1.d_omega_d_phi_x - fd2.d_omega_d_phi_x) / 3.0;
        CHECK(rel_err(p.d_omega_d_phi_z, dz) < 1e-6);
        CHECK(rel_err(p.d_omega_d_phi_x, dx) < 1e-6);
        CHECK(rel_err(p.d2_omega_d_phi_z2, fd1.d2_omega_d_phi_z2) < 1e-3);
        CHECK(rel_err(p.d2_omega_d_phi_x2, fd1.d2_omega_d_phi_x2) < 1e-3);
    }
}

TEST_CASE("curvature at the symmetry point matches the closed form") {
    const QubitCurves curves = testsupport::default_curves();
    const double phi_x = 0.33;
    const double sym = symmetry_point(curves, phi_x);
    const QubitPoint p = compute_point(curves, {sym, phi_x});
    const double a = 2.0 * curves.ip(phi_x) * kPhi0 / kHbar;
    CHECK(rel_err(p.d2_omega_d_phi_z2, a * a / curves.delta(phi_x)) < 1e-3);
    const auto fd = sensitivities_fd(curves, {sym, phi_x}, 1e-6);
    CHECK(rel_err(fd.d2_omega_d_phi_z2, a * a / curves.delta(phi_x)) < 1e-3);
    CHECK(std::abs(fd.d_omega_d_phi_z) < 1e-2);
}

TEST_CASE("interpolation rejects out-of-range flux") {
    const QubitCurves curves = testsupport::default_curves();
    CHECK_THROWS_AS(compute_point(curves, {0.5, 0.21}), std::out_of_range);
    CHECK_THROWS_AS((void)curves.ip(0.46), std::out_of_range);
    CHECK_THROWS_AS(sensitivities_fd(curves, {0.51, 0.25}, 1e-6), std::out_of_range);
}

TEST_CASE("delta inverse lookup") {
    const QubitCurves curves = testsupport::default_curves();
    const double target = kTwoPi * 3.0e9;
    const double px = curves.phi_x_for_delta(target);
    CHECK(curves.delta(px) == doctest::Approx(target).epsilon(1e-10));
    CHECK_THROWS_AS(curves.phi_x_for_delta(kTwoPi * 1e12), std::out_of_range);
}

TEST_CASE("curve validation rejects bad tables") {
    std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    std::vector<double> pos{1e-7, 1e-7, 1e-7, 1e-7};
    std::vector<double> neg{1e9, 1e9, -1e9, 1e9};
    CHECK_THROWS_AS(QubitCurves(p, pos, neg, 0.1), std::invalid_argument);
    std::vector<double> unsorted{0.1, 0.3, 0.2, 0.4};
    std::vector<double> ok{1e9, 1e9, 1e9, 1e9};
    CHECK_THROWS_AS(QubitCurves(unsorted, pos, ok, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(QubitCurves(p, pos, ok, 1.2), std::invalid_argument);
}

}  // TEST_SUITE
