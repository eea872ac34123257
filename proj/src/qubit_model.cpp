// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "qubit_model.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "constants.hpp"
#include "numerics.hpp"

namespace fluxdec {

QubitCurves::QubitCurves(std::vector<double> phi_x, std::vector<double> ip_amps,
                         std::vector<double> delta_rad, double asymmetry_d)
    : ip_(phi_x, std::move(ip_amps)),
      delta_(std::move(phi_x), std::move(delta_rad)),
      d_(asymmetry_d) {
    if (!(std::abs(d_) < 1.0)) {
        throw std::invalid_argument("junction asymmetry must satisfy |d| < 1");
    }
    // Positivity on the tabulated range, checked on a refined grid so a
    // spline overshoot between nodes is caught at construction.
    const int n_check = static_cast<int>(4 * ip_.size());
    for (int i = 0; i <= n_check; ++i) {
        const double p = ip_.x_min() + (ip_.x_max() - ip_.x_min()) * i / n_check;
        if (!(ip_.value(p) > 0.0)) throw std::invalid_argument("Ip table must be positive");
        if (!(delta_.value(p) > 0.0)) throw std::invalid_argument("Delta table must be positive");
    }
}

double QubitCurves::phi_x_for_delta(double delta_rad) const {
    const double lo = delta_.value(delta_.x_min());
    const double hi = delta_.value(delta_.x_max());
    const double dmin = std::min(lo, hi);
    const double dmax = std::max(lo, hi);
    if (!(delta_rad >= dmin && delta_rad <= dmax)) {
        throw std::out_of_range("delta value outside the tabulated range");
    }
    return brent_root([&](double p) { return delta_.value(p) - delta_rad; },
                      delta_.x_min(), delta_.x_max());
}

double symmetry_point(double asymmetry_d, double phi_x) {
    if (!(std::abs(phi_x) < 0.5)) {
        throw std::domain_error("symmetry_point requires |phi_x| < 0.5");
    }
    return 0.5 + std::atan(asymmetry_d * std::tan(kPi * phi_x)) / kTwoPi;
}

double symmetry_point(const QubitCurves& curves, double phi_x) {
    return symmetry_point(curves.asymmetry(), phi_x);
}

double symmetry_point_deriv(double d, double phi_x) {
    if (!(std::abs(phi_x) < 0.5)) {
        throw std::domain_error("symmetry_point requires |phi_x| < 0.5");
    }
    const double u = kPi * phi_x;
    const double c = std::cos(u);
    const double s = std::sin(u);
    const double den = c * c + d * d * s * s;
    return d / (2.0 * den);
}

double symmetry_point_deriv2(double d, double phi_x) {
    if (!(std::abs(phi_x) < 0.5)) {
        throw std::domain_error("symmetry_point requires |phi_x| < 0.5");
    }
    const double u = kPi * phi_x;
    const double c = std::cos(u);
    const double s = std::sin(u);
    const double den = c * c + d * d * s * s;
    return kPi * d * (1.0 - d * d) * std::sin(2.0 * u) / (2.0 * den * den);
}

QubitPoint compute_point(const QubitCurves& curves, const FluxBias& bias) {
    if (!std::isfinite(bias.phi_z) || !std::isfinite(bias.phi_x)) {
        throw std::domain_error("flux bias must be finite");
    }
    const double d = curves.asymmetry();
    const double ip = curves.ip(bias.phi_x);
    const double ip1 = curves.ip_deriv(bias.phi_x);
    const double ip2 = curves.ip_deriv2(bias.phi_x);
    const double delta = curves.delta(bias.phi_x);
    const double delta1 = curves.delta_deriv(bias.phi_x);
    const double delta2 = curves.delta_deriv2(bias.phi_x);
    const double sym = symmetry_point(d, bias.phi_x);
    const double sym1 = symmetry_point_deriv(d, bias.phi_x);
    const double sym2 = symmetry_point_deriv2(d, bias.phi_x);

    // H = -(hbar/2)(Delta sigma_x + eps sigma_z), eps = 2 Ip Phi0 (phi_z - sym)/hbar.
    const double dphi = bias.phi_z - sym;
    const double scale = 2.0 * kPhi0 / kHbar;
    const double eps = scale * ip * dphi;
    const double eps_z = scale * ip;                                // d eps / d phi_z
    const double eps_x = scale * (ip1 * dphi - ip * sym1);          // d eps / d phi_x
    const double eps_xx = scale * (ip2 * dphi - 2.0 * ip1 * sym1 - ip * sym2);

    QubitPoint p;
    p.epsilon = eps;
    p.delta = delta;
    p.omega01 = std::hypot(eps, delta);
    p.phi_z_sym = sym;
    p.d_eps_d_phi_z = eps_z;
    p.d_eps_d_phi_x = eps_x;
    p.d_delta_d_phi_x = delta1;

    const double w = p.omega01;
    p.d_omega_d_phi_z = eps * eps_z / w;
    p.d_omega_d_phi_x = (delta * delta1 + eps * eps_x) / w;
    // omega'' = (g' . g' + g . g'')/w - (g . g')^2 / w^3 with g = (eps, delta).
    p.d2_omega_d_phi_z2 = eps_z * eps_z / w - (eps * eps_z) * (eps * eps_z) / (w * w * w);
    {
        const double num1 = eps_x * eps_x + eps * eps_xx + delta1 * delta1 + delta * delta2;
        const double num2 = delta * delta1 + eps * eps_x;
        p.d2_omega_d_phi_x2 = num1 / w - num2 * num2 / (w * w * w);
    }
    // Transverse matrix elements in the energy eigenbasis:
    // |<e| dH/dphi |g>| / hbar = |delta' eps - eps' delta| / (2 w) for phi_x,
    // and (Ip Phi0/hbar)(delta/w) for phi_z.
    p.mz_ge = (ip * kPhi0 / kHbar) * (delta / w);
    p.mx_ge = std::abs(delta1 * eps - eps_x * delta) / (2.0 * w);
    return p;
}

FdSensitivities sensitivities_fd(const QubitCurves& curves, const FluxBias& bias,
                                 double step) {
    if (!(step > 0.0)) throw std::domain_error("finite-difference step must be positive");
    const auto omega = [&](double pz, double px) {
        return compute_point(curves, FluxBias{pz, px}).omega01;
    };
    const double f0 = omega(bias.phi_z, bias.phi_x);
    const double fzp = omega(bias.phi_z + step, bias.phi_x);
    const double fzm = omega(bias.phi_z - step, bias.phi_x);
    const double fxp = omega(bias.phi_z, bias.phi_x + step);
    const double fxm = omega(bias.phi_z, bias.phi_x - step);
    FdSensitivities fd;
    fd.d_omega_d_phi_z = (fzp - fzm) / (2.0 * step);
    fd.d_omega_d_phi_x = (fxp - fxm) / (2.0 * step);
    fd.d2_omega_d_phi_z2 = (fzp - 2.0 * f0 + fzm) / (step * step);
    fd.d2_omega_d_phi_x2 = (fxp - 2.0 * f0 + fxm) / (step * step);
    return fd;
}

}  // namespace fluxdec
