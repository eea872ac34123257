// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "noise_psd.hpp"

#include <cmath>
#include <stdexcept>

#include "constants.hpp"

namespace fluxdec {

namespace {

// coth(x) for x > 0 without overflow; ~1/x + x/3 for small x.
double coth(double x) {
    if (x > 20.0) return 1.0;
    if (x < 1e-8) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

double re_zb(double z0, double lb, double omega) {
    const double wl = omega * lb;
    return z0 * wl * wl / (z0 * z0 + wl * wl);
}

}  // namespace

double bose_einstein(double temperature, double omega) {
    if (!(temperature > 0.0) || !(omega > 0.0)) {
        throw std::domain_error("bose_einstein requires T > 0 and omega > 0");
    }
    return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

double chain_noise_photons(const AttenuationChain& chain, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("chain_noise_photons requires omega > 0");
    double n = bose_einstein(chain.source_temperature, omega);
    for (const auto& stage : chain.stages) {
        const double a = std::pow(10.0, -stage.atten_db / 10.0);
        n = a * n + (1.0 - a) * bose_einstein(stage.temperature, omega);
    }
    return n;
}

double photons_to_temperature(double n, double omega) {
    if (!(n > 0.0)) throw std::domain_error("photon number must be positive");
    if (!(omega > 0.0)) throw std::domain_error("omega must be positive");
    return kHbar * omega / (kBoltzmann * std::log1p(1.0 / n));
}

double biasline_noise_temperature(const BiasLineJN& line, double omega) {
    if (line.fixed_noise_temperature) return *line.fixed_noise_temperature;
    return photons_to_temperature(chain_noise_photons(line.chain, omega), omega);
}

double psd_eval(const PsdModel& model, double omega) {
    const double w = std::abs(omega);
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, OneOverF>) {
                if (w == 0.0) throw std::domain_error("1/f PSD diverges at omega = 0");
                return m.amp * std::pow(kTwoPi / w, m.alpha);
            } else if constexpr (std::is_same_v<T, Ohmic>) {
                if (w == 0.0) {
                    // B w^g coth(hbar w/2kT) -> 2 kB T B w^(g-1); finite only for g >= 1.
                    if (m.gamma > 1.0) return 0.0;
                    if (m.gamma == 1.0) return m.coeff * 2.0 * kBoltzmann * m.temperature / kHbar;
                    throw std::domain_error("sub-ohmic PSD diverges at omega = 0");
                }
                return m.coeff * std::pow(w, m.gamma) *
                       coth(kHbar * w / (2.0 * kBoltzmann * m.temperature));
            } else if constexpr (std::is_same_v<T, BiasLineJN>) {
                // S_I+(w) = hbar w Re[Z_b] coth(hbar w / 2 kB T_N) / (w L_b)^2.
                // The w -> 0 limit is the classical 2 kB T_N / Z0.
                const double t_ref = biasline_noise_temperature(m, std::max(w, kTwoPi * 1e-3));
                const double x = kHbar * w / (2.0 * kBoltzmann * t_ref);
                if (x < 1e-10) {
                    const double wl = w * m.inductance;
                    return 2.0 * kBoltzmann * t_ref / m.z0 *
                           (m.z0 * m.z0 / (m.z0 * m.z0 + wl * wl));
                }
                const double tn = biasline_noise_temperature(m, w);
                return kHbar * w * re_zb(m.z0, m.inductance, w) *
                       coth(kHbar * w / (2.0 * kBoltzmann * tn)) /
                       (w * w * m.inductance * m.inductance);
            } else {
                static_assert(std::is_same_v<T, FilteredSource>);
                if (w == 0.0 && m.amp_1f != 0.0) {
                    throw std::domain_error("1/f PSD diverges at omega = 0");
                }
                const double flat = (w == 0.0) ? m.white : m.amp_1f * (kTwoPi / w) + m.white;
                const double r = w / m.cutoff;
                return flat / (1.0 + r * r);
            }
        },
        model);
}

FluxPsd compose_flux_psd(const FluxNoiseSpec& spec, double omega) {
    const double s_int_z = psd_eval(spec.intrinsic_z, omega);
    const double s_int_x = psd_eval(spec.intrinsic_x, omega);
    const double c_int = spec.c_zx * std::sqrt(s_int_z * s_int_x);

    // Per-line noise referred to current on the bias line, A^2/Hz.
    double line_z = 0.0, line_x = 0.0;
    if (spec.source_z) line_z += psd_eval(*spec.source_z, omega) / (spec.r_z * spec.r_z);
    if (spec.biasline_z) line_z += psd_eval(*spec.biasline_z, omega);
    if (spec.source_x) line_x += psd_eval(*spec.source_x, omega) / (spec.r_x * spec.r_x);
    if (spec.biasline_x) line_x += psd_eval(*spec.biasline_x, omega);

    const double phi0_sq = kPhi0 * kPhi0;
    FluxPsd out;
    out.s_z = s_int_z + (spec.m_zz * spec.m_zz * line_z + spec.m_zx * spec.m_zx * line_x) / phi0_sq;
    out.s_x = s_int_x + (spec.m_xz * spec.m_xz * line_z + spec.m_xx * spec.m_xx * line_x) / phi0_sq;
    out.c_zx = c_int + (spec.m_zz * spec.m_xz * line_z + spec.m_zx * spec.m_xx * line_x) / phi0_sq;

    if (std::abs(out.c_zx) > std::sqrt(out.s_z * out.s_x) * (1.0 + 1e-9) + 1e-300) {
        throw std::domain_error("composed flux PSD violates the Cauchy-Schwarz bound");
    }
    return out;
}

ZCoords transform_zprime_to_z(double s_zprime, double s_x, double c_zprime_x) {
    if (std::abs(c_zprime_x) > std::sqrt(s_zprime * s_x) * (1.0 + 1e-9) + 1e-300) {
        throw std::domain_error("input cross-PSD violates the Cauchy-Schwarz bound");
    }
    ZCoords out;
    out.s_z = s_zprime + c_zprime_x + 0.25 * s_x;
    out.c_zx = c_zprime_x + 0.5 * s_x;
    return out;
}

ZTildeCoords transform_z_to_ztilde(double s_z, double s_x, double c_zx,
                                   double df_dphix) {
    ZTildeCoords out;
    out.s_ztilde = s_z - 2.0 * df_dphix * c_zx + df_dphix * df_dphix * s_x;
    out.c_ztilde_x = c_zx - df_dphix * s_x;
    return out;
}

GeometryNoise geometry_model(const LoopGeometry& geom) {
    double a_red = -1.0, a_blue = -1.0, a_yellow = -1.0;
    for (const auto& arm : geom.arms) {
        if (!(arm.length > 0.0 && arm.width > 0.0)) {
            throw std::domain_error("loop arm dimensions must be positive");
        }
        const double a = geom.b_coeff * arm.length / arm.width;
        if (arm.name == "red") a_red = a;
        else if (arm.name == "blue") a_blue = a;
        else if (arm.name == "yellow") a_yellow = a;
        else throw std::domain_error("unknown loop arm '" + arm.name + "'");
    }
    if (a_red < 0.0 || a_blue < 0.0 || a_yellow < 0.0) {
        throw std::domain_error("geometry needs red, blue and yellow arms");
    }
    GeometryNoise out;
    // z' loop = red + blue arms, x loop = red + yellow; the shared red arm
    // enters the two loops with opposite orientation.
    out.a_zprime = a_red + a_blue;
    out.a_x = a_red + a_yellow;
    out.c_zprime_x = -a_red;
    const ZCoords z = transform_zprime_to_z(out.a_zprime, out.a_x, out.c_zprime_x);
    out.a_z = z.s_z;
    out.c_zx_power = z.c_zx;
    out.czx_coeff = z.c_zx / std::sqrt(out.a_z * out.a_x);
    return out;
}

}  // namespace fluxdec
