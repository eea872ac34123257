// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "budget.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "constants.hpp"
#include "errors.hpp"
#include "mc_noise.hpp"
#include "parallel.hpp"

namespace fluxdec {

using nlohmann::json;

namespace {

json opt_json(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
}

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_cell(const std::optional<double>& v) {
    if (!v || !std::isfinite(*v)) return "";
    return format_g(*v);
}

// Frequency-noise sensitivity of a bias line's current noise: the same
// current couples into both loops through its two mutuals, fully correlated.
double line_sensitivity(const QubitPoint& p, double m_to_z, double m_to_x) {
    return (p.d_omega_d_phi_z * m_to_z + p.d_omega_d_phi_x * m_to_x) / kPhi0;
}

struct QuadratureChannels {
    std::function<double(double)> s_omega01;  // full composed, (rad/s)^2/Hz
    bool any = false;
};

// Composed qubit-frequency PSD for the quadrature route: intrinsic 1/f with
// correlation, enabled source / bias-line routes, and critical-current 1/f.
QuadratureChannels composed_s_omega01(const Model& model, const QubitPoint& point,
                                      double a_cc) {
    FluxNoiseSpec spec = model.noise;
    if (!model.channels.source_z) spec.source_z.reset();
    if (!model.channels.source_x) spec.source_x.reset();
    if (!model.channels.biasline_z) spec.biasline_z.reset();
    if (!model.channels.biasline_x) spec.biasline_x.reset();

    QuadratureChannels out;
    const bool flux_any = model.a_z_1f > 0.0 || model.a_x_1f > 0.0 ||
                          spec.source_z || spec.source_x || spec.biasline_z ||
                          spec.biasline_x;
    out.any = flux_any || a_cc > 0.0;
    const double gz = point.d_omega_d_phi_z;
    const double gx = point.d_omega_d_phi_x;
    const double alpha = model.dephasing.alpha;
    out.s_omega01 = [spec, gz, gx, a_cc, alpha](double w) {
        const FluxPsd f = compose_flux_psd(spec, w);
        double s = gz * gz * f.s_z + gx * gx * f.s_x + 2.0 * gz * gx * f.c_zx;
        if (a_cc > 0.0) s += a_cc * std::pow(kTwoPi / std::abs(w), alpha);
        return std::max(s, 0.0);
    };
    return out;
}

}  // namespace

FluxBias Model::resolve_bias() const {
    FluxBias b;
    b.phi_x = bias.phi_x;
    b.phi_z = bias.phi_z ? *bias.phi_z
                         : symmetry_point(curves, bias.phi_x) + bias.phi_z_offset;
    return b;
}

ClosedFormTphi closed_form_tphi(const Model& model, const QubitPoint& point,
                                double phi_x) {
    const double gz = point.d_omega_d_phi_z;
    const double gx = point.d_omega_d_phi_x;
    double a_w = gz * gz * model.a_z_1f + gx * gx * model.a_x_1f +
                 2.0 * gz * gx * model.noise.c_zx *
                     std::sqrt(model.a_z_1f * model.a_x_1f);
    a_w = std::max(a_w, 0.0);
    if (model.channels.critical_current) {
        const auto cc = gamma_phi_critical_current(
            point, model.curves, phi_x, model.critical_current.a_ic,
            model.critical_current.dln_delta_dln_ic, model.critical_current.dln_ip_dln_ic,
            1.0, model.dephasing.alpha);
        a_w += cc.a_omega01;
    }
    ClosedFormTphi out;
    out.ramsey = tphi_ramsey_closed_form_selfconsistent(a_w, model.dephasing.alpha,
                                                        model.dephasing.omega_low);
    const double eta1 = eta_factor(1, model.dephasing.alpha, model.dephasing.omega_low,
                                   model.dephasing.t_typ);
    out.echo = tphi_closed_form(a_w, eta1, model.dephasing.alpha);
    return out;
}

CoherenceBudget compute_budget(const Model& model, const FluxBias& bias,
                               const BudgetOptions& options) {
    CoherenceBudget b;
    b.bias = bias;
    b.point = compute_point(model.curves, bias);
    const QubitPoint& p = b.point;
    const double w01 = p.omega01;

    // Readout-chain derived quantities.
    b.resonator.phi_j = squid_minimize(model.squid, 0.0);
    b.resonator.l_sq = squid_effective_inductance(model.squid, b.resonator.phi_j);
    b.resonator.i_b0 = zero_point_current(model.resonator, b.resonator.l_sq);
    b.resonator.r1 = screening_taylor(model.squid).r1;
    b.resonator.g = qubit_resonator_coupling(p, model.resonator, b.resonator.r1,
                                             b.resonator.i_b0);

    // Relaxation channels.
    std::vector<ChannelRate> rates;
    const auto add = [&](Channel c, double gamma) { rates.push_back({c, gamma}); };
    if (model.channels.flux_z_1f) {
        add(Channel::flux_z_1f, gamma1_rate(p.mz_ge, psd_eval(model.noise.intrinsic_z, w01)));
    }
    if (model.channels.flux_x_1f) {
        add(Channel::flux_x_1f, gamma1_rate(p.mx_ge, psd_eval(model.noise.intrinsic_x, w01)));
    }
    if (model.channels.biasline_z && model.noise.biasline_z) {
        const double s_i = psd_eval(*model.noise.biasline_z, w01);
        const double phi0sq = kPhi0 * kPhi0;
        const double gamma =
            gamma1_rate(p.mz_ge, model.noise.m_zz * model.noise.m_zz * s_i / phi0sq) +
            gamma1_rate(p.mx_ge, model.noise.m_xz * model.noise.m_xz * s_i / phi0sq);
        add(Channel::biasline_z, gamma);
    }
    if (model.channels.biasline_x && model.noise.biasline_x) {
        const double s_i = psd_eval(*model.noise.biasline_x, w01);
        const double phi0sq = kPhi0 * kPhi0;
        const double gamma =
            gamma1_rate(p.mz_ge, model.noise.m_zx * model.noise.m_zx * s_i / phi0sq) +
            gamma1_rate(p.mx_ge, model.noise.m_xx * model.noise.m_xx * s_i / phi0sq);
        add(Channel::biasline_x, gamma);
    }
    if (model.channels.purcell) {
        add(Channel::purcell, 1.0 / t1_purcell(w01, model.resonator, b.resonator.g));
    }
    if (model.channels.ohmic_flux_z) {
        add(Channel::ohmic_flux_z, gamma1_rate(p.mz_ge, psd_eval(model.ohmic.flux_z, w01)));
    }
    if (model.channels.ohmic_flux_x) {
        add(Channel::ohmic_flux_x, gamma1_rate(p.mx_ge, psd_eval(model.ohmic.flux_x, w01)));
    }
    if (model.channels.ohmic_charge) {
        add(Channel::ohmic_charge, gamma1_rate(1.0, psd_eval(model.ohmic.charge, w01)));
    }
    if (!rates.empty()) {
        const T1Budget t1 = combine_t1(std::move(rates));
        b.t1_total_rate = t1.total_rate;
        b.t1_total = t1.total_t1;
        for (const auto& r : t1.rates) {
            T1ChannelReport rep;
            rep.name = channel_name(r.channel);
            rep.gamma = r.gamma1;
            if (r.gamma1 > 0.0) rep.t1 = 1.0 / r.gamma1;
            if (t1.total_rate > 0.0) rep.fraction = r.gamma1 / t1.total_rate;
            b.t1_channels.push_back(std::move(rep));
        }
    }

    // Dephasing. Closed form covers the pure 1/f content; the quadrature
    // route integrates the full composed spectrum against the filters.
    double a_cc = 0.0;
    const double eta1 = eta_factor(1, model.dephasing.alpha, model.dephasing.omega_low,
                                   model.dephasing.t_typ);
    if (model.channels.critical_current) {
        const auto cc = gamma_phi_critical_current(
            p, model.curves, bias.phi_x, model.critical_current.a_ic,
            model.critical_current.dln_delta_dln_ic, model.critical_current.dln_ip_dln_ic,
            1.0, model.dephasing.alpha);
        a_cc = cc.a_omega01;
        DephasingChannelReport rep;
        rep.name = "critical_current_1f";
        const auto tr = tphi_ramsey_closed_form_selfconsistent(
            a_cc, model.dephasing.alpha, model.dephasing.omega_low);
        const auto te = tphi_closed_form(a_cc, eta1, model.dephasing.alpha);
        rep.t_ramsey = tr;
        rep.t_echo = te;
        rep.gamma_ramsey = tr ? 1.0 / *tr : 0.0;
        rep.gamma_echo = te ? 1.0 / *te : 0.0;
        b.dephasing_channels.push_back(std::move(rep));
    }
    {
        const auto cf = closed_form_tphi(model, p, bias.phi_x);
        b.tphi_ramsey_closed_form = cf.ramsey;
        b.tphi_echo_closed_form = cf.echo;
        DephasingChannelReport rep;
        rep.name = "intrinsic_flux_1f";
        const double gz = p.d_omega_d_phi_z;
        const double gx = p.d_omega_d_phi_x;
        const double a_int =
            std::max(gz * gz * model.a_z_1f + gx * gx * model.a_x_1f +
                         2.0 * gz * gx * model.noise.c_zx *
                             std::sqrt(model.a_z_1f * model.a_x_1f),
                     0.0);
        const auto tr = tphi_ramsey_closed_form_selfconsistent(
            a_int, model.dephasing.alpha, model.dephasing.omega_low);
        const auto te = tphi_closed_form(a_int, eta1, model.dephasing.alpha);
        rep.t_ramsey = tr;
        rep.t_echo = te;
        rep.gamma_ramsey = tr ? 1.0 / *tr : 0.0;
        rep.gamma_echo = te ? 1.0 / *te : 0.0;
        b.dephasing_channels.push_back(std::move(rep));
    }
    // Source-voltage channels (filtered 1/f + white): quadrature per line.
    const auto source_channel = [&](const char* name, const FilteredSource& src,
                                    double r_series, double m_to_z, double m_to_x) {
        const double sens = line_sensitivity(p, m_to_z, m_to_x);
        const auto s = [&, sens](double w) {
            return sens * sens * psd_eval(src, w) / (r_series * r_series);
        };
        DephasingChannelReport rep;
        rep.name = name;
        if (options.with_quadrature && sens != 0.0 &&
            (src.amp_1f > 0.0 || src.white > 0.0)) {
            const auto ramsey = tphi_quadrature(s, 0, model.dephasing.omega_low, 2);
            const auto echo = tphi_quadrature(s, 1, model.dephasing.omega_low, 2);
            rep.t_ramsey = ramsey.t_phi;
            rep.t_echo = echo.t_phi;
            rep.gamma_ramsey = ramsey.t_phi ? 1.0 / *ramsey.t_phi : 0.0;
            rep.gamma_echo = echo.t_phi ? 1.0 / *echo.t_phi : 0.0;
        }
        b.dephasing_channels.push_back(std::move(rep));
    };
    if (model.channels.source_z && model.noise.source_z) {
        source_channel("source_z", *model.noise.source_z, model.noise.r_z,
                       model.noise.m_zz, model.noise.m_xz);
    }
    if (model.channels.source_x && model.noise.source_x) {
        source_channel("source_x", *model.noise.source_x, model.noise.r_x,
                       model.noise.m_zx, model.noise.m_xx);
    }
    // Bias-line thermal noise at low frequency: white dephasing rate.
    const auto biasline_white = [&](const char* name, const BiasLineJN& line,
                                    double m_to_z, double m_to_x) {
        const double sens = line_sensitivity(p, m_to_z, m_to_x);
        const double gamma = gamma_phi_white(sens, psd_eval(line, 0.0));
        DephasingChannelReport rep;
        rep.name = name;
        rep.gamma_ramsey = gamma;
        rep.gamma_echo = gamma;
        if (gamma > 0.0) {
            rep.t_ramsey = 1.0 / gamma;
            rep.t_echo = 1.0 / gamma;
        }
        b.dephasing_channels.push_back(std::move(rep));
    };
    if (model.channels.biasline_z && model.noise.biasline_z) {
        biasline_white("biasline_z_lowfreq", *model.noise.biasline_z, model.noise.m_zz,
                       model.noise.m_xz);
    }
    if (model.channels.biasline_x && model.noise.biasline_x) {
        biasline_white("biasline_x_lowfreq", *model.noise.biasline_x, model.noise.m_zx,
                       model.noise.m_xx);
    }
    double gamma_extra_ramsey = 0.0;
    double gamma_extra_echo = 0.0;
    if (model.channels.shot_noise) {
        const double gamma = gamma_phi_shot_noise(model.resonator.kappa,
                                                  model.shot_noise.chi_disp,
                                                  model.shot_noise.nbar);
        DephasingChannelReport rep;
        rep.name = "photon_shot_noise";
        rep.gamma_ramsey = rep.gamma_echo = gamma;
        if (gamma > 0.0) rep.t_ramsey = rep.t_echo = 1.0 / gamma;
        b.dephasing_channels.push_back(std::move(rep));
        gamma_extra_ramsey += gamma;
        gamma_extra_echo += gamma;
    }
    if (model.channels.second_order_flux) {
        const double gamma = gamma_phi_second_order(p.d2_omega_d_phi_z2, model.a_z_1f) +
                             gamma_phi_second_order(p.d2_omega_d_phi_x2, model.a_x_1f);
        DephasingChannelReport rep;
        rep.name = "second_order_flux";
        rep.gamma_ramsey = rep.gamma_echo = gamma;
        if (gamma > 0.0) rep.t_ramsey = rep.t_echo = 1.0 / gamma;
        b.dephasing_channels.push_back(std::move(rep));
        gamma_extra_ramsey += gamma;
        gamma_extra_echo += gamma;
    }

    // Quadrature totals over the full composed spectrum.
    double flux_rate_r = b.tphi_ramsey_closed_form ? 1.0 / *b.tphi_ramsey_closed_form : 0.0;
    double flux_rate_e = b.tphi_echo_closed_form ? 1.0 / *b.tphi_echo_closed_form : 0.0;
    if (options.with_quadrature) {
        const QuadratureChannels quad = composed_s_omega01(model, p, a_cc);
        if (quad.any) {
            const auto ramsey = tphi_quadrature(quad.s_omega01, 0, model.dephasing.omega_low,
                                                options.envelope_samples);
            const auto echo = tphi_quadrature(quad.s_omega01, 1, model.dephasing.omega_low,
                                              options.envelope_samples);
            b.tphi_ramsey_quadrature = ramsey.t_phi;
            b.tphi_echo_quadrature = echo.t_phi;
            b.envelope_ramsey = ramsey.envelope;
            b.envelope_echo = echo.envelope;
        }
        flux_rate_r = b.tphi_ramsey_quadrature ? 1.0 / *b.tphi_ramsey_quadrature : 0.0;
        flux_rate_e = b.tphi_echo_quadrature ? 1.0 / *b.tphi_echo_quadrature : 0.0;
    }
    const double total_r = flux_rate_r + gamma_extra_ramsey;
    const double total_e = flux_rate_e + gamma_extra_echo;
    if (total_r > 0.0) b.tphi_ramsey_total = 1.0 / total_r;
    if (total_e > 0.0) b.tphi_echo_total = 1.0 / total_e;

    b.anneal = anneal_noise(p, model.a_z_1f, model.a_x_1f, model.noise.c_zx);
    if (model.geometry) b.geometry_prediction = geometry_model(*model.geometry);
    return b;
}

std::string budget_json(const CoherenceBudget& b) {
    json j;
    j["bias"] = {{"phi_z", b.bias.phi_z},
                 {"phi_x", b.bias.phi_x},
                 {"phi_z_sym", b.point.phi_z_sym},
                 {"epsilon_hz", b.point.epsilon / kTwoPi},
                 {"delta_hz", b.point.delta / kTwoPi},
                 {"omega01_hz", b.point.omega01 / kTwoPi}};
    j["resonator"] = {{"g_hz", b.resonator.g / kTwoPi},
                      {"l_sq_h", b.resonator.l_sq},
                      {"i_b0_a", b.resonator.i_b0},
                      {"r1", b.resonator.r1}};
    json t1ch = json::array();
    for (const auto& c : b.t1_channels) {
        t1ch.push_back({{"channel", c.name},
                        {"gamma_per_s", c.gamma},
                        {"t1_s", opt_json(c.t1)},
                        {"fraction", opt_json(c.fraction)}});
    }
    j["t1"] = {{"channels", t1ch},
               {"total_rate_per_s", b.t1_total_rate},
               {"total_s", opt_json(b.t1_total)}};
    json dch = json::array();
    for (const auto& c : b.dephasing_channels) {
        dch.push_back({{"channel", c.name},
                       {"gamma_phi_ramsey_per_s", c.gamma_ramsey},
                       {"gamma_phi_echo_per_s", c.gamma_echo},
                       {"t_phi_ramsey_s", opt_json(c.t_ramsey)},
                       {"t_phi_echo_s", opt_json(c.t_echo)}});
    }
    j["tphi"] = {{"channels", dch},
                 {"ramsey_closed_form_s", opt_json(b.tphi_ramsey_closed_form)},
                 {"echo_closed_form_s", opt_json(b.tphi_echo_closed_form)},
                 {"ramsey_quadrature_s", opt_json(b.tphi_ramsey_quadrature)},
                 {"echo_quadrature_s", opt_json(b.tphi_echo_quadrature)},
                 {"ramsey_total_s", opt_json(b.tphi_ramsey_total)},
                 {"echo_total_s", opt_json(b.tphi_echo_total)}};
    j["anneal"] = {{"delta_hz", b.anneal.delta / kTwoPi},
                   {"eps_hz", b.anneal.eps / kTwoPi},
                   {"a_eps", b.anneal.a_eps},
                   {"a_delta", b.anneal.a_delta},
                   {"a_delta_eps", b.anneal.a_delta_eps}};
    if (b.geometry_prediction) {
        const auto& g = *b.geometry_prediction;
        j["geometry_prediction"] = {{"a_zprime", g.a_zprime},
                                    {"a_x", g.a_x},
                                    {"c_zprime_x", g.c_zprime_x},
                                    {"a_z", g.a_z},
                                    {"c_zx_power", g.c_zx_power},
                                    {"czx_coeff", g.czx_coeff}};
    }
    return j.dump(2);
}

std::string budget_text(const CoherenceBudget& b) {
    std::ostringstream os;
    char line[160];
    os << "bias point: phi_z = " << format_g(b.bias.phi_z)
       << ", phi_x = " << format_g(b.bias.phi_x) << "\n";
    os << "  omega01/2pi = " << format_g(b.point.omega01 / kTwoPi)
       << " Hz (delta/2pi = " << format_g(b.point.delta / kTwoPi)
       << " Hz, eps/2pi = " << format_g(b.point.epsilon / kTwoPi) << " Hz)\n";
    os << "  qubit-resonator g/2pi = " << format_g(b.resonator.g / kTwoPi) << " Hz\n\n";
    os << "relaxation budget\n";
    std::snprintf(line, sizeof(line), "  %-16s %14s %14s %10s\n", "channel",
                  "gamma [1/s]", "T1 [s]", "fraction");
    os << line;
    for (const auto& c : b.t1_channels) {
        std::snprintf(line, sizeof(line), "  %-16s %14.6g %14s %10s\n", c.name.c_str(),
                      c.gamma, csv_cell(c.t1).empty() ? "inf" : csv_cell(c.t1).c_str(),
                      c.fraction ? format_g(*c.fraction).c_str() : "-");
        os << line;
    }
    os << "  total T1 = " << (b.t1_total ? format_g(*b.t1_total) + " s" : "inf") << "\n\n";
    os << "dephasing budget\n";
    std::snprintf(line, sizeof(line), "  %-20s %14s %14s\n", "channel",
                  "Tphi(Ramsey)[s]", "Tphi(echo)[s]");
    os << line;
    for (const auto& c : b.dephasing_channels) {
        std::snprintf(line, sizeof(line), "  %-20s %14s %14s\n", c.name.c_str(),
                      c.t_ramsey ? format_g(*c.t_ramsey).c_str() : "inf",
                      c.t_echo ? format_g(*c.t_echo).c_str() : "inf");
        os << line;
    }
    os << "  Ramsey Tphi: closed form = "
       << (b.tphi_ramsey_closed_form ? format_g(*b.tphi_ramsey_closed_form) : "inf")
       << " s, quadrature = "
       << (b.tphi_ramsey_quadrature ? format_g(*b.tphi_ramsey_quadrature) : "inf")
       << " s, total = "
       << (b.tphi_ramsey_total ? format_g(*b.tphi_ramsey_total) : "inf") << " s\n";
    os << "  echo   Tphi: closed form = "
       << (b.tphi_echo_closed_form ? format_g(*b.tphi_echo_closed_form) : "inf")
       << " s, quadrature = "
       << (b.tphi_echo_quadrature ? format_g(*b.tphi_echo_quadrature) : "inf")
       << " s, total = " << (b.tphi_echo_total ? format_g(*b.tphi_echo_total) : "inf")
       << " s\n\n";
    os << "annealing noise at this point (1 Hz powers, (rad/s)^2)\n";
    os << "  A_eps = " << format_g(b.anneal.a_eps)
       << ", A_delta = " << format_g(b.anneal.a_delta)
       << ", A_delta_eps = " << format_g(b.anneal.a_delta_eps) << "\n";
    return os.str();
}

std::string envelope_csv(const std::vector<std::pair<double, double>>& env) {
    std::ostringstream os;
    os << "tau_s,envelope\n";
    for (const auto& [tau, e] : env) {
        os << format_g(tau) << "," << format_g(e) << "\n";
    }
    return os.str();
}

std::string run_sweep_csv(const Model& model) {
    const auto& sw = model.sweep;
    if (sw.samples < 1) throw ConfigError("sweep.samples must be >= 1");
    std::vector<FluxBias> points(sw.samples);
    for (int i = 0; i < sw.samples; ++i) {
        const double v = sw.samples == 1
                             ? sw.min
                             : sw.min + (sw.max - sw.min) * double(i) / (sw.samples - 1);
        FluxBias fb;
        switch (sw.axis) {
            case SweepSettings::Axis::phi_z:
                fb.phi_x = sw.phi_x;
                fb.phi_z = v;
                break;
            case SweepSettings::Axis::phi_x:
                fb.phi_x = v;
                fb.phi_z = sw.phi_z ? *sw.phi_z
                                    : symmetry_point(model.curves, v) + sw.phi_z_offset;
                break;
            case SweepSettings::Axis::delta: {
                fb.phi_x = model.curves.phi_x_for_delta(v * kTwoPi);
                fb.phi_z = sw.phi_z ? *sw.phi_z
                                    : symmetry_point(model.curves, fb.phi_x) +
                                          sw.phi_z_offset;
                break;
            }
        }
        points[i] = fb;
    }

    static const char* kT1Channels[] = {"flux_z_1f",    "flux_x_1f",    "biasline_z",
                                        "biasline_x",   "purcell",      "ohmic_flux_z",
                                        "ohmic_flux_x", "ohmic_charge"};
    std::vector<std::string> rows(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const FluxBias& fb = points[i];
        const QubitPoint p = compute_point(model.curves, fb);
        CoherenceBudget b = compute_budget(model, fb, BudgetOptions{false, 0});
        std::ostringstream os;
        os << format_g(fb.phi_z) << "," << format_g(fb.phi_x) << ","
           << format_g(p.omega01 / kTwoPi) << "," << csv_cell(b.t1_total);
        for (const char* name : kT1Channels) {
            std::optional<double> t1;
            for (const auto& c : b.t1_channels) {
                if (c.name == name) {
                    t1 = c.t1;
                    break;
                }
            }
            os << "," << csv_cell(t1);
        }
        os << "," << csv_cell(b.tphi_ramsey_closed_form) << ","
           << csv_cell(b.tphi_echo_closed_form);
        rows[i] = os.str();
    });

    std::ostringstream os;
    os << "phi_z,phi_x,omega01_hz,t1_total_s";
    for (const char* name : kT1Channels) os << ",t1_" << name << "_s";
    os << ",tphi_ramsey_s,tphi_echo_s\n";
    for (const auto& r : rows) os << r << "\n";
    return os.str();
}

std::string run_anneal_csv(const Model& model) {
    const auto rows = anneal_schedule(model.curves, model.anneal.phi_x_start,
                                      model.anneal.phi_x_end, model.anneal.phi_z_offset,
                                      model.anneal.samples, model.a_z_1f, model.a_x_1f,
                                      model.noise.c_zx);
    std::ostringstream os;
    os << "s,delta_hz,eps_hz,a_eps,a_delta,a_delta_eps\n";
    for (const auto& r : rows) {
        os << format_g(r.s) << "," << format_g(r.noise.delta / kTwoPi) << ","
           << format_g(r.noise.eps / kTwoPi) << "," << format_g(r.noise.a_eps) << ","
           << format_g(r.noise.a_delta) << "," << format_g(r.noise.a_delta_eps) << "\n";
    }
    return os.str();
}

ValidationOutcome run_validation(const Model& model) {
    ValidationOutcome out;
    const FluxBias bias = model.resolve_bias();
    const QubitPoint p = compute_point(model.curves, bias);
    const double gz = p.d_omega_d_phi_z;
    const double gx = p.d_omega_d_phi_x;
    const double a_w = std::max(
        gz * gz * model.a_z_1f + gx * gx * model.a_x_1f +
            2.0 * gz * gx * model.noise.c_zx * std::sqrt(model.a_z_1f * model.a_x_1f),
        0.0);

    json summary;
    summary["a_omega01"] = a_w;
    summary["tolerance"] = model.validate.tolerance;
    if (a_w == 0.0) {
        // Nothing decays: both routes agree trivially.
        summary["protocols"] = json::array();
        summary["pass"] = true;
        out.summary_json = summary.dump(2);
        out.ramsey_csv = "tau_s,mc_envelope,mc_stderr,analytic_envelope\n";
        out.echo_csv = out.ramsey_csv;
        out.pass = true;
        return out;
    }

    const double alpha = model.dephasing.alpha;
    const double alpha_mc = model.validate.alpha_mc.value_or(alpha);
    EnsembleSpec spec;
    spec.dt = model.validate.dt;
    spec.n_samples = model.validate.n_samples;
    spec.n_traces = model.validate.n_traces;
    spec.seed = model.validate.seed;
    spec.omega_low = model.dephasing.omega_low;
    spec.target = OneOverF{a_w, alpha_mc};
    const NoiseEnsemble ensemble(spec);

    const auto s_analytic = [a_w, alpha](double w) {
        return a_w * std::pow(kTwoPi / std::abs(w), alpha);
    };

    json protocols = json::array();
    bool pass = true;
    for (int n = 0; n <= 1; ++n) {
        const auto analytic = tphi_quadrature(s_analytic, n, model.dephasing.omega_low);
        if (!analytic.t_phi) {
            throw ConvergenceError("analytic dephasing time outside [1 ns, 1 s]");
        }
        const double t_an = *analytic.t_phi;
        const double duration = spec.dt * spec.n_samples;
        const double tau_hi = std::min(2.5 * t_an, duration);
        const double tau_lo = t_an / 8.0;
        std::vector<double> taus(33);
        for (std::size_t k = 0; k < taus.size(); ++k) {
            taus[k] = tau_lo * std::pow(tau_hi / tau_lo, double(k) / (taus.size() - 1));
        }
        const auto mc = simulate_decay(ensemble, n, 1.0, taus);
        const double t_mc = envelope_one_over_e_time(mc);
        const double rel = std::abs(t_mc - t_an) / t_an;
        const bool ok = rel <= model.validate.tolerance;
        pass = pass && ok;

        std::ostringstream csv;
        csv << "tau_s,mc_envelope,mc_stderr,analytic_envelope\n";
        for (const auto& s : mc) {
            csv << format_g(s.tau) << "," << format_g(s.envelope) << ","
                << format_g(s.stderr_) << ","
                << format_g(std::exp(-dephasing_chi(s_analytic, s.tau, n,
                                                    model.dephasing.omega_low)))
                << "\n";
        }
        (n == 0 ? out.ramsey_csv : out.echo_csv) = csv.str();
        protocols.push_back({{"protocol", n == 0 ? "ramsey" : "echo"},
                             {"t_analytic_s", t_an},
                             {"t_mc_s", t_mc},
                             {"relative_error", rel},
                             {"pass", ok}});
    }
    summary["protocols"] = protocols;
    summary["pass"] = pass;
    out.summary_json = summary.dump(2);
    out.pass = pass;
    return out;
}

}  // namespace fluxdec
