// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "constants.hpp"
#include "errors.hpp"
#include "numerics.hpp"

namespace fluxdec {

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// Ramsey / echo filter functions of z = omega * tau.
double filter_g(int n, double z) {
    if (n == 0) {
        const double s = sinc(0.5 * z);
        return s * s;
    }
    const double s = sinc(0.25 * z);
    const double q = std::sin(0.25 * z);
    return s * s * q * q;
}

// Large-z mean of the filter over one oscillation period:
// g0 -> 2/z^2 (mean sin^2 = 1/2), g1 -> 6/z^2 (mean sin^4 = 3/8).
double filter_tail_coeff(int n) { return n == 0 ? 2.0 : 6.0; }

// Int_{z0}^inf f(z) G_n(z) dz via adaptive head, per-period Gauss-Kronrod
// sums, and an averaged-filter tail. `f` must be slowly varying or decaying.
double integrate_filtered(const std::function<double(double)>& f, int n, double z0,
                          double rel_tol) {
    double acc = 0.0;
    const auto integrand = [&](double z) { return f(z) * filter_g(n, z); };

    std::size_t k_start = 1;
    if (z0 < kTwoPi) {
        acc += integrate(integrand, z0, kTwoPi, rel_tol * 0.1, 0.0);
    } else {
        k_start = static_cast<std::size_t>(std::floor(z0 / kTwoPi));
        acc += integrate(integrand, z0, kTwoPi * (k_start + 1), rel_tol * 0.1, 0.0);
        k_start += 1;
    }

    // Period-by-period summation until contributions are negligible.
    const std::size_t k_max = 4000;
    std::size_t k = k_start;
    int quiet = 0;
    double z_stop = kTwoPi * k_start;
    for (; k < k_max; ++k) {
        const double a = kTwoPi * k;
        const double b = kTwoPi * (k + 1);
        const double part = integrate(integrand, a, b, 1e-9, 0.0, 12);
        acc += part;
        z_stop = b;
        if (std::abs(part) < 0.25 * rel_tol * std::abs(acc)) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    // Averaged tail: Int_{z_stop}^inf f(z) c/z^2 dz with u = 1/z.
    const double c = filter_tail_coeff(n);
    acc += integrate([&](double u) { return u > 0.0 ? c * f(1.0 / u) : 0.0; }, 0.0,
                     1.0 / z_stop, 1e-8, 1e-300);
    return acc;
}

}  // namespace

const char* channel_name(Channel c) {
    switch (c) {
        case Channel::flux_z_1f: return "flux_z_1f";
        case Channel::flux_x_1f: return "flux_x_1f";
        case Channel::biasline_z: return "biasline_z";
        case Channel::biasline_x: return "biasline_x";
        case Channel::purcell: return "purcell";
        case Channel::ohmic_flux_z: return "ohmic_flux_z";
        case Channel::ohmic_flux_x: return "ohmic_flux_x";
        case Channel::ohmic_charge: return "ohmic_charge";
    }
    return "unknown";
}

double gamma1_rate(double matrix_element, double s_plus_at_omega01) {
    if (!(s_plus_at_omega01 >= 0.0)) {
        throw std::domain_error("PSD must be non-negative at the qubit frequency");
    }
    return matrix_element * matrix_element * 2.0 * s_plus_at_omega01;
}

double t1_purcell(double omega01, const ResonatorParams& res, double g) {
    if (omega01 == res.omega_r) {
        throw std::domain_error("Purcell formula undefined on resonance");
    }
    if (g == 0.0) return std::numeric_limits<double>::infinity();
    const double ratio = (res.omega_r - omega01) / g;
    return ratio * ratio / res.kappa;
}

T1Budget combine_t1(std::vector<ChannelRate> rates) {
    if (rates.empty()) throw std::domain_error("combine_t1 needs at least one channel");
    T1Budget out;
    out.rates = std::move(rates);
    std::stable_sort(out.rates.begin(), out.rates.end(),
                     [](const ChannelRate& a, const ChannelRate& b) {
                         return a.gamma1 > b.gamma1;
                     });
    for (const auto& r : out.rates) {
        if (!(r.gamma1 >= 0.0)) throw std::domain_error("channel rates must be >= 0");
        out.total_rate += r.gamma1;
    }
    if (out.total_rate > 0.0) out.total_t1 = 1.0 / out.total_rate;
    return out;
}

double eta_factor(int n, double alpha, double omega_low, double t_typ) {
    if (n != 0 && n != 1) throw std::domain_error("eta_factor: n must be 0 or 1");
    if (!(alpha >= 0.5 && alpha <= 1.5)) {
        throw std::domain_error("eta_factor: alpha outside [0.5, 1.5]");
    }
    double z0 = 0.0;
    if (n == 0) {
        z0 = omega_low * t_typ;
        if (!(z0 > 0.0)) throw std::domain_error("eta_factor: omega_low * t_typ must be > 0");
    }
    const double integral = integrate_filtered(
        [alpha](double z) { return std::pow(z, -alpha); }, n, z0, 1e-9);
    return std::pow(kTwoPi, alpha - 1.0) * integral;
}

std::optional<double> tphi_closed_form(double a_omega01, double eta, double alpha) {
    if (!(a_omega01 >= 0.0)) throw std::domain_error("noise power must be >= 0");
    if (a_omega01 == 0.0) return std::nullopt;
    const double rate = std::pow(a_omega01 * eta, 1.0 / (1.0 + alpha));
    return 1.0 / rate;
}

std::optional<double> tphi_ramsey_closed_form_selfconsistent(double a_omega01,
                                                             double alpha,
                                                             double omega_low) {
    if (a_omega01 == 0.0) return std::nullopt;
    double t = 1e-7;
    for (int i = 0; i < 24; ++i) {
        const double eta = eta_factor(0, alpha, omega_low, t);
        const double next = *tphi_closed_form(a_omega01, eta, alpha);
        if (std::abs(next - t) < 1e-10 * t) return next;
        t = next;
    }
    return t;
}

double dephasing_chi(const std::function<double(double)>& s_omega01, double tau,
                     int n, double omega_low) {
    if (!(tau > 0.0)) throw std::domain_error("tau must be positive");
    const double z0 = std::max(omega_low, 0.0) * tau;
    const double integral = integrate_filtered(
        [&](double z) { return s_omega01(z / tau); }, n, z0, 1e-7);
    return tau / kTwoPi * integral;
}

DephasingResult tphi_quadrature(const std::function<double(double)>& s_omega01,
                                int n, double omega01_low, int envelope_samples) {
    const double tau_min = 1e-9;
    const double tau_max = 1.0;
    const auto chi = [&](double tau) { return dephasing_chi(s_omega01, tau, n, omega01_low); };

    DephasingResult out;
    const double chi_min = chi(tau_min);
    if (chi_min > 1.0) {
        throw std::domain_error("dephasing time below the 1 ns bracket");
    }
    const double chi_max = chi(tau_max);
    if (chi_max >= 1.0) {
        const double lt = brent_root(
            [&](double l) { return chi(std::exp(l)) - 1.0; }, std::log(tau_min),
            std::log(tau_max), 1e-10);
        out.t_phi = std::exp(lt);
    }

    const double center = out.t_phi.value_or(1e-6);
    const double lo = std::max(tau_min, center / 20.0);
    const double hi = std::min(tau_max, center * 3.0);
    out.envelope.reserve(envelope_samples);
    for (int i = 0; i < envelope_samples; ++i) {
        const double tau = lo * std::pow(hi / lo, double(i) / (envelope_samples - 1));
        out.envelope.emplace_back(tau, std::exp(-chi(tau)));
    }
    return out;
}

double gamma_phi_white(double d_omega_d_lambda, double s_at_zero) {
    if (!std::isfinite(s_at_zero) || s_at_zero < 0.0) {
        throw std::domain_error("white dephasing requires finite S(0) >= 0");
    }
    return 0.5 * d_omega_d_lambda * d_omega_d_lambda * s_at_zero;
}

double gamma_phi_second_order(double d2_omega_d_lambda2, double a_lambda) {
    if (!(a_lambda >= 0.0)) throw std::domain_error("noise power must be >= 0");
    return 1.6 * std::abs(d2_omega_d_lambda2) * a_lambda;
}

double gamma_phi_shot_noise(double kappa, double chi_disp, double nbar) {
    if (!(kappa > 0.0) || !(chi_disp > 0.0)) {
        throw std::domain_error("kappa and dispersive shift must be positive");
    }
    if (!(nbar >= 0.0)) throw std::domain_error("photon number must be >= 0");
    const double k2 = kappa * kappa;
    const double x2 = 4.0 * chi_disp * chi_disp;
    return k2 / (k2 + x2) * (x2 / kappa) * nbar;
}

CriticalCurrentDephasing gamma_phi_critical_current(const QubitPoint& point,
                                                    const QubitCurves& curves,
                                                    double phi_x, double a_ic,
                                                    double dln_delta_dln_ic,
                                                    double dln_ip_dln_ic,
                                                    double eta, double alpha) {
    if (!(a_ic >= 0.0)) throw std::domain_error("a_ic must be >= 0");
    const double d = curves.asymmetry();
    // d(Phi_z_sym)/dd at fixed phi_x.
    const double t = std::tan(kPi * phi_x);
    const double dsym_dd = t / (kTwoPi * (1.0 + d * d * t * t));
    // Asymmetry mechanism: a fluctuation of one X junction's normalized
    // critical current moves d by +-(1-d^2)/2, shifting the symmetry point.
    const double q = point.d_omega_d_phi_z * dsym_dd * 0.5 * (1.0 - d * d);
    // Common-mode mechanism through Ip and Delta; the X pair carries half the
    // total weight split by junction size, the main junctions a quarter each.
    const double common = (point.delta * point.delta / point.omega01) * dln_delta_dln_ic +
                          (point.epsilon * point.epsilon / point.omega01) * dln_ip_dln_ic;
    const double s_xl = -q + 0.25 * (1.0 + d) * common;
    const double s_xr = q + 0.25 * (1.0 - d) * common;
    const double s_m = 0.25 * common;

    CriticalCurrentDephasing out;
    const double sum_sq = s_xl * s_xl + s_xr * s_xr + 2.0 * s_m * s_m;
    out.sensitivity = std::sqrt(sum_sq);
    out.a_omega01 = sum_sq * a_ic;
    const auto tphi = tphi_closed_form(out.a_omega01, eta, alpha);
    out.gamma_phi = tphi ? 1.0 / *tphi : 0.0;
    return out;
}

}  // namespace fluxdec
