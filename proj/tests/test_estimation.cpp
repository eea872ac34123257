// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>
#include <vector>

#include "constants.hpp"
#include "decoherence.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "test_support.hpp"

using namespace fluxdec;
using testsupport::rel_err;

namespace {

DephasingModelParams fit_params() {
    DephasingModelParams p;
    p.alpha = 1.0;
    p.omega_low = kTwoPi * 10.0;
    p.t_typ = 1e-7;
    return p;
}

// Synthetic T_phi dataset from known flux-noise parameters.
std::vector<CoherenceRow> synth_dataset(const QubitCurves& curves, double sqrt_az,
                                        double sqrt_ax, double c_zx, double rel_noise,
                                        std::uint64_t seed) {
    const DephasingModelParams params = fit_params();
    const double eta0 = eta_factor(0, params.alpha, params.omega_low, params.t_typ);
    const double eta1 = eta_factor(1, params.alpha, 0.0, 0.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<CoherenceRow> rows;
    for (double phi_x : {0.30, 0.35, 0.40}) {
        const double sym = symmetry_point(curves, phi_x);
        for (int i = -7; i <= 7; ++i) {
            CoherenceRow r;
            r.phi_x = phi_x;
            r.phi_z = sym + i * 1.2e-3;
            r.protocol = (i % 2 == 0) ? Protocol::ramsey : Protocol::echo;
            const QubitPoint p = compute_point(curves, {r.phi_z, r.phi_x});
            const double t = predict_tphi(p, sqrt_az * sqrt_az, sqrt_ax * sqrt_ax,
                                          c_zx, r.protocol, params, eta0, eta1);
            double noisy = t * (1.0 + rel_noise * gauss(rng));
            if (noisy < 0.05 * t) noisy = 0.05 * t;
            r.t_phi = noisy;
            r.sigma_t = rel_noise > 0.0 ? rel_noise * t : 0.0;
            rows.push_back(r);
        }
    }
    return rows;
}

}  // namespace

TEST_SUITE("estimation") {

TEST_CASE("extract_symmetry_point on exact and noisy traces") {
    const int n = 257;
    std::vector<double> phi(n), y(n);
    const double center = 0.5171;
    for (int i = 0; i < n; ++i) {
        phi[i] = 0.49 + 0.05 * i / (n - 1);
        const double u = phi[i] - center;
        y[i] = 0.3 + 1.7 * u * u + 40.0 * u * u * u * u;  // even about the center
    }
    SUBCASE("exact trace recovers the center to 1e-6") {
        CHECK(std::abs(extract_symmetry_point(phi, y) - center) < 1e-6);
    }
    SUBCASE("1% white noise stays within 1 mPhi0 over repeated draws") {
        double range = 0.0;
        for (double v : y) range = std::max(range, v);
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> gauss(0.0, 0.01 * range);
            std::vector<double> noisy = y;
            for (double& v : noisy) v += gauss(rng);
            CHECK(std::abs(extract_symmetry_point(phi, noisy) - center) < 1e-3);
        }
    }
}

TEST_CASE("extract_symmetry_point rejects a monotone trace") {
    const int n = 129;
    std::vector<double> phi(n), y(n);
    for (int i = 0; i < n; ++i) {
        phi[i] = 0.5 + 1e-3 * i;
        y[i] = 2.0 * phi[i];
    }
    CHECK_THROWS_AS(extract_symmetry_point(phi, y), std::domain_error);
}

TEST_CASE("extract_symmetry_point grid-shift equivariance") {
    // Binary-fraction grid and shift keep every sum exact, so the shifted
    // search is the identical arithmetic sequence.
    const int n = 257;
    std::vector<double> phi(n), y(n);
    for (int i = 0; i < n; ++i) {
        phi[i] = i / 256.0;
        const double u = phi[i] - 0.4765625;  // 122/256
        y[i] = u * u + 0.2 * u * u * u * u;
    }
    const double c0 = extract_symmetry_point(phi, y);
    std::vector<double> shifted = phi;
    for (double& v : shifted) v += 0.5;
    const double c1 = extract_symmetry_point(shifted, y);
    CHECK(c1 - c0 == 0.5);
}

TEST_CASE("fit_asymmetry round trip at the reported asymmetry") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> gauss(0.0, 5e-4);
    std::vector<SymmetryRow> data;
    for (int i = 0; i < 21; ++i) {
        SymmetryRow r;
        r.phi_x = 0.05 + 0.40 * i / 20.0;
        r.phi_z_sym = symmetry_point(0.069, r.phi_x) + gauss(rng);
        r.sigma = 5e-4;
        data.push_back(r);
    }
    const AsymmetryFit fit = fit_asymmetry(data);
    CHECK(std::abs(fit.d - 0.069) < 3e-3);
    CHECK(fit.std_error > 0.0);
    CHECK(fit.std_error < 3e-3);
}

TEST_CASE("fit_asymmetry on symmetric-junction data returns zero") {
    std::mt19937_64 rng(43);
    std::normal_distribution<double> gauss(0.0, 2e-4);
    std::vector<SymmetryRow> data;
    for (int i = 0; i < 15; ++i) {
        SymmetryRow r;
        r.phi_x = 0.05 + 0.38 * i / 14.0;
        r.phi_z_sym = 0.5 + gauss(rng);
        r.sigma = 2e-4;
        data.push_back(r);
    }
    const AsymmetryFit fit = fit_asymmetry(data);
    CHECK(std::abs(fit.d) < 3.0 * fit.std_error + 1e-3);
}

TEST_CASE("fit_asymmetry rejects insufficient data") {
    std::vector<SymmetryRow> two{{0.1, 0.5008, 1e-4}, {0.3, 0.5056, 1e-4}};
    CHECK_THROWS_AS(fit_asymmetry(two), DataError);
}

TEST_CASE("flux-noise fit round trip") {
    const QubitCurves curves = testsupport::default_curves();
    const auto data = synth_dataset(curves, 1.33e-5, 7.6e-6, 0.47, 0.10, 99);
    const NoiseFit fit = fit_flux_noise(data, curves, fit_params());
    CHECK(std::abs(fit.sqrt_a_z - 1.33e-5) < 2.0 * fit.std_errors[0]);
    CHECK(std::abs(fit.sqrt_a_x - 7.6e-6) < 2.0 * fit.std_errors[1]);
    CHECK(std::abs(fit.c_zx - 0.47) < 2.0 * fit.std_errors[2]);
    CHECK(std::abs(fit.c_zx) < 1.0);
    CHECK(fit.chi2_reduced < 3.0);
}

TEST_CASE("noise-free round trip is essentially exact") {
    const QubitCurves curves = testsupport::default_curves();
    auto data = synth_dataset(curves, 1.1e-5, 6.0e-6, -0.3, 0.0, 1);
    for (auto& r : data) r.sigma_t = 0.0;
    const NoiseFit fit = fit_flux_noise(data, curves, fit_params());
    CHECK(rel_err(fit.sqrt_a_z, 1.1e-5) < 1e-5);
    CHECK(rel_err(fit.sqrt_a_x, 6.0e-6) < 1e-5);
    CHECK(std::abs(fit.c_zx + 0.3) < 1e-4);
}

TEST_CASE("zero-correlation truth puts the T_phi maximum at the symmetry point") {
    const QubitCurves curves = testsupport::default_curves();
    const auto data = synth_dataset(curves, 1.33e-5, 7.6e-6, 0.0, 0.02, 7);
    const NoiseFit fit = fit_flux_noise(data, curves, fit_params());
    const DephasingModelParams params = fit_params();
    const double eta0 = eta_factor(0, params.alpha, params.omega_low, params.t_typ);
    const double eta1 = eta_factor(1, params.alpha, 0.0, 0.0);
    const double phi_x = 0.35;
    const double sym = symmetry_point(curves, phi_x);
    const double pitch = 2e-5;
    double best_dz = -1.0, best_t = 0.0;
    for (int i = -500; i <= 500; ++i) {
        const QubitPoint p = compute_point(curves, {sym + i * pitch, phi_x});
        const double t = predict_tphi(p, fit.sqrt_a_z * fit.sqrt_a_z,
                                      fit.sqrt_a_x * fit.sqrt_a_x, fit.c_zx,
                                      Protocol::ramsey, params, eta0, eta1);
        if (t > best_t) {
            best_t = t;
            best_dz = i * pitch;
        }
    }
    CHECK(std::abs(best_dz) <= 20.0 * pitch);
}

TEST_CASE("positive fitted correlation shifts the T_phi maximum left") {
    const QubitCurves curves = testsupport::default_curves();
    const auto data = synth_dataset(curves, 1.33e-5, 7.6e-6, 0.47, 0.05, 3);
    const NoiseFit fit = fit_flux_noise(data, curves, fit_params());
    CHECK(fit.c_zx > 0.2);
    const DephasingModelParams params = fit_params();
    const double eta0 = eta_factor(0, params.alpha, params.omega_low, params.t_typ);
    const double eta1 = eta_factor(1, params.alpha, 0.0, 0.0);
    for (double phi_x : {0.30, 0.35, 0.40}) {
        const double sym = symmetry_point(curves, phi_x);
        const double pitch = 2e-5;
        double best_dz = 0.0, best_t = 0.0;
        for (int i = -500; i <= 500; ++i) {
            const QubitPoint p = compute_point(curves, {sym + i * pitch, phi_x});
            const double t = predict_tphi(p, fit.sqrt_a_z * fit.sqrt_a_z,
                                          fit.sqrt_a_x * fit.sqrt_a_x, fit.c_zx,
                                          Protocol::ramsey, params, eta0, eta1);
            if (t > best_t) {
                best_t = t;
                best_dz = i * pitch;
            }
        }
        CHECK(best_dz < -pitch);
    }
}

TEST_CASE("all-symmetry-point rows leave the fit unidentifiable") {
    const QubitCurves curves = testsupport::default_curves();
    const DephasingModelParams params = fit_params();
    const double eta0 = eta_factor(0, params.alpha, params.omega_low, params.t_typ);
    const double eta1 = eta_factor(1, params.alpha, 0.0, 0.0);
    std::vector<CoherenceRow> rows;
    for (double phi_x : {0.30, 0.35, 0.40}) {
        CoherenceRow r;
        r.phi_x = phi_x;
        r.phi_z = symmetry_point(curves, phi_x);  // flux-Z sensitivity vanishes
        const QubitPoint p = compute_point(curves, {r.phi_z, r.phi_x});
        r.t_phi = predict_tphi(p, 1.769e-10, 5.776e-11, 0.0, Protocol::ramsey, params,
                               eta0, eta1);
        r.sigma_t = 0.05 * r.t_phi;
        rows.push_back(r);
        rows.push_back(r);
    }
    CHECK_THROWS_AS(fit_flux_noise(rows, curves, params), ConvergenceError);
}

TEST_CASE("dataset validity checks") {
    const QubitCurves curves = testsupport::default_curves();
    std::vector<CoherenceRow> rows{{0.517, 0.32, 2e-7, 1e-8, Protocol::ramsey},
                                   {0.518, 0.32, 1e-7, 1e-8, Protocol::ramsey},
                                   {0.519, 0.32, 2e-7, 1e-8, Protocol::echo},
                                   {0.520, 0.32, 3e-7, 1e-8, Protocol::echo}};
    CHECK_THROWS_AS(fit_flux_noise(rows, curves, fit_params()), DataError);  // 1 phi_x
}

TEST_CASE("CSV ingestion") {
    SUBCASE("coherence dataset") {
        const std::string text =
            "phi_z,phi_x,t_phi_s,sigma_s,protocol\n"
            "0.517,0.32,2.1e-7,2e-8,ramsey\n"
            "0.518,0.35,8.9e-7,9e-8,echo\n";
        const auto rows = parse_coherence_csv(text);
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].protocol == Protocol::ramsey);
        CHECK(rows[1].t_phi == doctest::Approx(8.9e-7));
    }
    SUBCASE("missing column is named") {
        const std::string text = "phi_z,phi_x,t_phi_s,sigma_s\n0.5,0.3,1e-7,1e-8\n";
        bool threw = false;
        try {
            parse_coherence_csv(text);
        } catch (const DataError& e) {
            threw = true;
            CHECK(std::string(e.what()).find("protocol") != std::string::npos);
        }
        CHECK(threw);
    }
    SUBCASE("bad protocol and bad number are row-anchored") {
        CHECK_THROWS_AS(parse_coherence_csv("phi_z,phi_x,t_phi_s,sigma_s,protocol\n"
                                            "0.5,0.3,1e-7,1e-8,hahn\n"),
                        DataError);
        CHECK_THROWS_AS(parse_coherence_csv("phi_z,phi_x,t_phi_s,sigma_s,protocol\n"
                                            "0.5,abc,1e-7,1e-8,ramsey\n"),
                        DataError);
    }
    SUBCASE("empty text and header-only are rejected") {
        CHECK_THROWS_AS(parse_coherence_csv(""), DataError);
        CHECK_THROWS_AS(parse_symmetry_csv("phi_x,phi_z_sym,sigma\n"), DataError);
    }
    SUBCASE("symmetry dataset") {
        const auto rows = parse_symmetry_csv("phi_x,phi_z_sym,sigma\n0.1,0.5008,\n");
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].sigma == 0.0);
    }
}

}  // TEST_SUITE
