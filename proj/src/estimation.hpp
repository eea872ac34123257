// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "qubit_model.hpp"

namespace fluxdec {

/// Reflection-symmetry center of a sampled trace y(phi): the center c
/// minimizing the L2 mismatch between the trace and its mirror image, found
/// by coarse scan plus golden-section refinement with sub-sample
/// interpolation. Errors when no interior minimum exists.
double extract_symmetry_point(std::span<const double> phi, std::span<const double> y);

struct SymmetryRow {
    double phi_x = 0.0;
    double phi_z_sym = 0.0;
    double sigma = 0.0;  // Phi0; 0 means unweighted
};

struct AsymmetryFit {
    double d = 0.0;
    double std_error = 0.0;
    double chi2 = 0.0;
    int n_rows = 0;
    int iterations = 0;
};

/// Weighted least squares of Phi_z_sym(phi_x; d) = 1/2 + arctan(d tan(pi
/// phi_x))/(2 pi) over the single parameter d (Gauss-Newton, analytic
/// derivative). Needs >= 3 rows with |phi_x| < 1/2.
AsymmetryFit fit_asymmetry(const std::vector<SymmetryRow>& data);

enum class Protocol { ramsey, echo };

struct CoherenceRow {
    double phi_z = 0.0;
    double phi_x = 0.0;
    double t_phi = 0.0;   // s
    double sigma_t = 0.0; // s; 0 means unweighted
    Protocol protocol = Protocol::ramsey;
};

/// Dephasing-model conventions used when predicting T_phi during the fit.
struct DephasingModelParams {
    double alpha = 1.0;
    double omega_low = 0.0;  // rad/s
    double t_typ = 1e-7;     // s, frozen Ramsey infrared cutoff
};

struct NoiseFit {
    double sqrt_a_z = 0.0;  // Phi0/sqrt(Hz)
    double sqrt_a_x = 0.0;  // Phi0/sqrt(Hz)
    double c_zx = 0.0;
    std::array<double, 3> std_errors{};            // same order as above
    std::array<std::array<double, 3>, 3> covariance{};
    double chi2 = 0.0;
    double chi2_reduced = 0.0;
    int n_rows = 0;
    int iterations = 0;
};

/// Nonlinear weighted least squares of the closed-form T_phi model over
/// (sqrt(A_z), sqrt(A_x), c_zx), with c_zx bounded through tanh.
/// Levenberg-Marquardt; throws ConvergenceError on failure or on a flat
/// Hessian direction (unidentifiable dataset).
NoiseFit fit_flux_noise(const std::vector<CoherenceRow>& data, const QubitCurves& curves,
                        const DephasingModelParams& params);

/// Model T_phi for one row given 1-Hz flux powers; used by the fit and by
/// sweep/argmax diagnostics.
double predict_tphi(const QubitPoint& point, double a_z, double a_x, double c_zx,
                    Protocol protocol, const DephasingModelParams& params,
                    double eta0, double eta1);

/// CSV ingestion (header required). Throws DataError naming the offending
/// column or row.
std::vector<CoherenceRow> parse_coherence_csv(const std::string& text);
std::vector<SymmetryRow> parse_symmetry_csv(const std::string& text);

}  // namespace fluxdec
