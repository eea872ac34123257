// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qubit_model.hpp"
#include "resonator.hpp"

namespace fluxdec {

enum class Channel {
    flux_z_1f,
    flux_x_1f,
    biasline_z,
    biasline_x,
    purcell,
    ohmic_flux_z,
    ohmic_flux_x,
    ohmic_charge,
};
const char* channel_name(Channel c);

struct ChannelRate {
    Channel channel;
    double gamma1 = 0.0;  // 1/s
};

/// Bloch-Redfield relaxation rate, Gamma1 = |m|^2 * 2 S+(omega01), with m the
/// transverse matrix element of the coupling operator over hbar (rad/s per
/// noise unit) and S+ the symmetrized PSD at the qubit frequency.
double gamma1_rate(double matrix_element, double s_plus_at_omega01);

/// Purcell-limited T1 = [(omega_r - omega01)/g]^2 / kappa, seconds.
double t1_purcell(double omega01, const ResonatorParams& res, double g);

struct T1Budget {
    std::vector<ChannelRate> rates;  // sorted by decreasing rate
    double total_rate = 0.0;         // 1/s
    std::optional<double> total_t1;  // absent when no channel contributes
};
T1Budget combine_t1(std::vector<ChannelRate> rates);

/// Dephasing filter integral factor
///   eta_N = (2 pi)^(alpha-1) Int dz z^-alpha G_N(z),
/// G_0 = sinc^2(z/2) from z = omega_low * t_typ, G_1 = sinc^2(z/4) sin^2(z/4)
/// from 0. Relative accuracy ~1e-8.
double eta_factor(int n, double alpha, double omega_low, double t_typ);

/// 1/T_phi = (A_omega01 * eta)^(1/(1+alpha)); A is the 1-Hz power of the
/// qubit-frequency noise in (rad/s)^2/Hz. Absent result means no dephasing.
std::optional<double> tphi_closed_form(double a_omega01, double eta, double alpha);

/// Ramsey closed form with the infrared cutoff evaluated self-consistently
/// at t_typ = T_phi (fixed point; the frozen-t form is the fit convention).
std::optional<double> tphi_ramsey_closed_form_selfconsistent(double a_omega01,
                                                             double alpha,
                                                             double omega_low);

/// chi(tau) = tau^2/(2 pi) Int_{omega_low}^inf S(w) g_N(w tau) dw.
double dephasing_chi(const std::function<double(double)>& s_omega01, double tau,
                     int n, double omega_low);

struct DephasingResult {
    std::optional<double> t_phi;  // 1/e time of exp(-chi); absent if > 1 s
    std::vector<std::pair<double, double>> envelope;  // (tau_s, exp(-chi))
};

/// Solves chi(T_phi) = 1 by bracketed root finding on [1 ns, 1 s] and samples
/// the decay envelope. Throws when dephasing is faster than the bracket.
DephasingResult tphi_quadrature(const std::function<double(double)>& s_omega01,
                                int n, double omega_low, int envelope_samples = 96);

/// White-noise (Markovian) pure dephasing, Gamma_phi = (d_omega/d_lambda)^2 S(0)/2.
double gamma_phi_white(double d_omega_d_lambda, double s_at_zero);

/// Quasistatic second-order 1/f dephasing, Gamma ~ 1.6 |d2_omega| A_lambda.
double gamma_phi_second_order(double d2_omega_d_lambda2, double a_lambda);

/// Photon-shot-noise dephasing, kappa and dispersive shift chi in rad/s.
double gamma_phi_shot_noise(double kappa, double chi_disp, double nbar);

/// 1/f critical-current noise with normalized per-junction power a_ic.
/// Two coupling mechanisms: the X-loop junction pair shifting the asymmetry d
/// (and with it Phi_z_sym), and common critical-current scaling of Ip and
/// Delta through the supplied logarithmic derivatives. Per-junction
/// sensitivities combine in quadrature.
struct CriticalCurrentDephasing {
    double sensitivity = 0.0;  // sqrt(sum_i (d_omega/d_ic_i)^2), rad/s
    double a_omega01 = 0.0;    // sensitivity^2 * a_ic, (rad/s)^2/Hz at 1 Hz
    double gamma_phi = 0.0;    // 1/s at the supplied eta
};
CriticalCurrentDephasing gamma_phi_critical_current(const QubitPoint& point,
                                                    const QubitCurves& curves,
                                                    double phi_x, double a_ic,
                                                    double dln_delta_dln_ic,
                                                    double dln_ip_dln_ic,
                                                    double eta, double alpha);

}  // namespace fluxdec
