// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "qubit_model.hpp"

namespace fluxdec {

/// rf-SQUID terminating the readout resonator.
struct SquidParams {
    double ic = 2e-6;      // junction critical current, A
    double lg = 60e-12;    // geometric inductance, H
    double phi_r = 0.0;    // external SQUID flux, Phi0 units

    double beta_l() const;  // 2 pi Lg Ic / Phi0
};

struct ResonatorParams {
    double omega_r = 0.0;  // rad/s
    double kappa = 0.0;    // rad/s
    double z0 = 50.0;      // ohm
    double vph = 1.2e8;    // waveguide phase velocity, m/s
    double length = 0.0;   // waveguide length, m
    double m_qr = 0.0;     // qubit-SQUID mutual, H
};

/// Junction phase minimizing the classical rf-SQUID potential at bias
/// current i_b, following the single-valued branch. Errors in the
/// multivalued regime when no monotone bracket exists.
double squid_minimize(const SquidParams& sq, double i_b);

/// Effective SQUID inductance from the curvature of the potential minimum:
/// L_sq = (Phi0/2 pi)^2 / U''(phi_J).
double squid_effective_inductance(const SquidParams& sq, double phi_j);

/// Taylor coefficients of the geometric-inductance current,
/// I_g(I_b) = I_g0 + r1 I_b + r2 I_b^2 + O(I_b^3), by central differences.
struct ScreeningTaylor {
    double i_g0 = 0.0;  // A
    double r1 = 0.0;    // dimensionless
    double r2 = 0.0;    // 1/A
};
ScreeningTaylor screening_taylor(const SquidParams& sq);

/// Zero-point amplitude of the bias current entering the SQUID.
double zero_point_current(const ResonatorParams& res, double l_sq);

/// Linear qubit-resonator exchange coupling g (rad/s):
/// hbar g = M_qr * |<e| dH/dPhi_z |g>| * r1 * I_b0.
double qubit_resonator_coupling(const QubitPoint& point, const ResonatorParams& res,
                                double r1, double i_b0);

}  // namespace fluxdec
