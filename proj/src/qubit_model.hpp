// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "spline.hpp"

namespace fluxdec {

/// Tabulated persistent current Ip(phi_x) and tunneling amplitude
/// Delta(phi_x), plus the X-loop junction asymmetry d. Fluxes dimensionless
/// in Phi0, Ip in amperes, Delta in rad/s. Immutable after construction.
class QubitCurves {
  public:
    QubitCurves(std::vector<double> phi_x, std::vector<double> ip_amps,
                std::vector<double> delta_rad, double asymmetry_d);

    double ip(double phi_x) const { return ip_.value(phi_x); }
    double ip_deriv(double phi_x) const { return ip_.deriv(phi_x); }
    double ip_deriv2(double phi_x) const { return ip_.deriv2(phi_x); }
    double delta(double phi_x) const { return delta_.value(phi_x); }
    double delta_deriv(double phi_x) const { return delta_.deriv(phi_x); }
    double delta_deriv2(double phi_x) const { return delta_.deriv2(phi_x); }

    double asymmetry() const { return d_; }
    double phi_x_min() const { return ip_.x_min(); }
    double phi_x_max() const { return ip_.x_max(); }
    bool contains(double phi_x) const { return ip_.contains(phi_x); }

    /// phi_x such that delta(phi_x) equals the given value; the Delta table
    /// must be monotone over its range for this to be well defined.
    double phi_x_for_delta(double delta_rad) const;

  private:
    CubicSpline ip_;
    CubicSpline delta_;
    double d_;
};

struct FluxBias {
    double phi_z = 0.0;  // Phi0 units
    double phi_x = 0.0;  // Phi0 units
};

/// Two-level working point with first/second-order flux sensitivities.
/// All rates/frequencies in rad/s; flux derivatives per Phi0.
struct QubitPoint {
    double epsilon = 0.0;
    double delta = 0.0;
    double omega01 = 0.0;
    double phi_z_sym = 0.0;
    double d_eps_d_phi_z = 0.0;
    double d_eps_d_phi_x = 0.0;
    double d_delta_d_phi_x = 0.0;
    double d_omega_d_phi_z = 0.0;
    double d_omega_d_phi_x = 0.0;
    double d2_omega_d_phi_z2 = 0.0;
    double d2_omega_d_phi_x2 = 0.0;
    double mz_ge = 0.0;  // |<e| dH/dPhi_z |g>| / hbar
    double mx_ge = 0.0;  // |<e| dH/dPhi_x |g>| / hbar
};

/// Z-loop symmetry point Phi_z_sym(phi_x)/Phi0 = 1/2 + arctan(d tan(pi phi_x))/(2 pi).
/// Requires |phi_x| < 1/2.
double symmetry_point(const QubitCurves& curves, double phi_x);
double symmetry_point(double asymmetry_d, double phi_x);

/// d(Phi_z_sym)/d(phi_x) and its second derivative.
double symmetry_point_deriv(double asymmetry_d, double phi_x);
double symmetry_point_deriv2(double asymmetry_d, double phi_x);

QubitPoint compute_point(const QubitCurves& curves, const FluxBias& bias);

/// Central finite-difference sensitivities, for validating the analytic
/// chain rule in compute_point.
struct FdSensitivities {
    double d_omega_d_phi_z = 0.0;
    double d_omega_d_phi_x = 0.0;
    double d2_omega_d_phi_z2 = 0.0;
    double d2_omega_d_phi_x2 = 0.0;
};
FdSensitivities sensitivities_fd(const QubitCurves& curves, const FluxBias& bias,
                                 double step);

}  // namespace fluxdec
