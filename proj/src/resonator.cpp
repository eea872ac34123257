// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "resonator.hpp"

#include <cmath>
#include <stdexcept>

#include "constants.hpp"
#include "errors.hpp"
#include "numerics.hpp"

namespace fluxdec {

double SquidParams::beta_l() const { return kTwoPi * lg * ic / kPhi0; }

namespace {

// Stationarity condition of the rf-SQUID potential, scaled to amperes:
// g(phi) = Ic sin(phi) + (Phi0/2 pi)(phi - 2 pi phi_r)/Lg - I_b.
double potential_gradient(const SquidParams& sq, double phi, double i_b) {
    return sq.ic * std::sin(phi) +
           (kPhi0 / kTwoPi) * (phi - kTwoPi * sq.phi_r) / sq.lg - i_b;
}

}  // namespace

double squid_minimize(const SquidParams& sq, double i_b) {
    if (!(sq.ic > 0.0) || !(sq.lg > 0.0)) {
        throw std::domain_error("SQUID parameters must be positive");
    }
    const double beta = sq.beta_l();
    const double center = kTwoPi * sq.phi_r + i_b * kTwoPi * sq.lg / kPhi0;
    // g is strictly increasing for beta_L < 1, so a symmetric bracket around
    // the bare (Ic = 0) solution always contains the unique root. For
    // beta_L >= 1 only a local bracket on the continued branch is valid.
    double half = (beta < 1.0) ? (beta / (1.0 - beta) + 1.0) : 0.45 * kPi;
    half = std::min(half, kPi);
    double lo = center - half;
    double hi = center + half;
    double glo = potential_gradient(sq, lo, i_b);
    double ghi = potential_gradient(sq, hi, i_b);
    if (beta < 1.0) {
        // Expand until the sign change is enclosed (always succeeds).
        int guard = 0;
        while (glo > 0.0 && guard++ < 64) { lo -= kPi; glo = potential_gradient(sq, lo, i_b); }
        guard = 0;
        while (ghi < 0.0 && guard++ < 64) { hi += kPi; ghi = potential_gradient(sq, hi, i_b); }
    }
    if (!(glo <= 0.0 && ghi >= 0.0)) {
        throw ConvergenceError("squid_minimize: no bracket on the single-valued branch "
                               "(multivalued regime, beta_L = " + std::to_string(beta) + ")");
    }
    const double phi = brent_root(
        [&](double p) { return potential_gradient(sq, p, i_b); }, lo, hi, 1e-15);
    if (!(std::cos(phi) * beta > -1.0)) {
        throw ConvergenceError("squid_minimize: stationary point is not a minimum");
    }
    return phi;
}

double squid_effective_inductance(const SquidParams& sq, double phi_j) {
    // U''(phi) = (Ic Phi0/2 pi) cos(phi) + (Phi0/2 pi)^2 / Lg.
    const double denom = (kTwoPi / kPhi0) * sq.ic * std::cos(phi_j) + 1.0 / sq.lg;
    if (!(denom > 0.0)) {
        throw std::domain_error("potential curvature not positive; not a minimum");
    }
    return 1.0 / denom;
}

ScreeningTaylor screening_taylor(const SquidParams& sq) {
    const double h = 1e-3 * sq.ic;
    const auto i_g = [&](double i_b) {
        const double phi = squid_minimize(sq, i_b);
        return (phi - kTwoPi * sq.phi_r) * (kPhi0 / kTwoPi) / sq.lg;
    };
    const double f0 = i_g(0.0);
    const double fp = i_g(h);
    const double fm = i_g(-h);
    ScreeningTaylor t;
    t.i_g0 = f0;
    t.r1 = (fp - fm) / (2.0 * h);
    t.r2 = (fp - 2.0 * f0 + fm) / (2.0 * h * h);
    return t;
}

double zero_point_current(const ResonatorParams& res, double l_sq) {
    if (!(res.omega_r > 0.0 && res.z0 > 0.0 && res.vph > 0.0 && res.length > 0.0)) {
        throw std::domain_error("resonator parameters must be positive");
    }
    const double num = res.vph * kHbar * res.omega_r * res.z0;
    const double den = res.vph * l_sq * res.z0 +
                       res.length * (l_sq * l_sq * res.omega_r * res.omega_r +
                                     res.z0 * res.z0);
    return std::sqrt(num / den);
}

double qubit_resonator_coupling(const QubitPoint& point, const ResonatorParams& res,
                                double r1, double i_b0) {
    // hbar * mz_ge / Phi0 is the transverse element of dH/dPhi_z in amperes.
    const double element_amps = kHbar * point.mz_ge / kPhi0;
    return std::abs(res.m_qr * element_amps * r1 * i_b0) / kHbar;
}

}  // namespace fluxdec
