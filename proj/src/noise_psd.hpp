// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fluxdec {

// All spectral densities are symmetrized, S+(w) = S+(-w) >= 0, carried in
// (unit)^2/Hz as a function of angular frequency in rad/s. 1/f amplitudes
// are quoted at w = 2*pi * 1 Hz.

/// S+(w) = amp * (2*pi/|w|)^alpha.
struct OneOverF {
    double amp = 0.0;    // (unit)^2/Hz at 1 Hz
    double alpha = 1.0;  // in [0.5, 1.5]
};

/// S+(w) = coeff * |w|^gamma * coth(hbar |w| / 2 kB T); the quantum
/// (1 + coth) form symmetrizes to coth.
struct Ohmic {
    double coeff = 0.0;
    double gamma = 1.0;
    double temperature = 0.02;  // K
};

struct AttenuationStage {
    double temperature = 4.0;  // plate temperature, K
    double atten_db = 0.0;
};

/// Ordered source -> device; thermal photons composed stage by stage.
struct AttenuationChain {
    std::vector<AttenuationStage> stages;
    double source_temperature = 300.0;  // K
};

/// Johnson-Nyquist current noise of a bias line: inductance L_b shunted by
/// Z0, radiating at the chain's frequency-dependent noise temperature
/// (or a fixed one when provided).
struct BiasLineJN {
    double z0 = 50.0;          // ohm
    double inductance = 25e-12;  // H
    AttenuationChain chain;
    std::optional<double> fixed_noise_temperature;  // K, bypasses the chain
};

/// Biasing-source voltage noise: 1/f + white, behind a first-order low-pass.
struct FilteredSource {
    double amp_1f = 0.0;   // V^2/Hz at 1 Hz
    double white = 0.0;    // V^2/Hz
    double cutoff = 1.0;   // rad/s
};

using PsdModel = std::variant<OneOverF, Ohmic, BiasLineJN, FilteredSource>;

/// Symmetrized PSD at angular frequency w (rad/s). Diverging models reject w = 0.
double psd_eval(const PsdModel& model, double omega);

/// Thermal photon number after the attenuation chain,
/// n_i = A_i n_{i-1} + (1 - A_i) n_BE(T_i, w), starting from the source.
double chain_noise_photons(const AttenuationChain& chain, double omega);

/// Equivalent blackbody temperature of a photon number at frequency w.
double photons_to_temperature(double n, double omega);
double bose_einstein(double temperature, double omega);

/// Effective noise temperature seen by a bias line at w.
double biasline_noise_temperature(const BiasLineJN& line, double omega);

/// Composed flux-noise environment of the two qubit loops.
struct FluxNoiseSpec {
    PsdModel intrinsic_z = OneOverF{};
    PsdModel intrinsic_x = OneOverF{};
    double c_zx = 0.0;  // dimensionless intrinsic correlation, |c| < 1

    // Mutuals (H) routing bias-line current noise and source voltage noise
    // into the loops; r_z/r_x are the source series resistances (ohm).
    double m_zz = 0.0, m_zx = 0.0, m_xz = 0.0, m_xx = 0.0;
    double r_z = 1.0, r_x = 1.0;
    std::optional<FilteredSource> source_z, source_x;
    std::optional<BiasLineJN> biasline_z, biasline_x;
};

/// (S_phi_z, S_phi_x, C_phi_z_phi_x) at one frequency, Phi0^2/Hz.
struct FluxPsd {
    double s_z = 0.0;
    double s_x = 0.0;
    double c_zx = 0.0;  // cross-PSD, not the dimensionless coefficient
};

FluxPsd compose_flux_psd(const FluxNoiseSpec& spec, double omega);

/// z' -> z flux-coordinate transform: S_z = S_z' + C_z'x + S_x/4,
/// C_zx = C_z'x + S_x/2.
struct ZCoords {
    double s_z = 0.0;
    double c_zx = 0.0;
};
ZCoords transform_zprime_to_z(double s_zprime, double s_x, double c_zprime_x);

/// z -> z~ transform that absorbs the asymmetry-induced shift F(phi_x):
/// S_z~ = S_z - 2 F' C_zx + F'^2 S_x, C_z~x = C_zx - F' S_x.
struct ZTildeCoords {
    double s_ztilde = 0.0;
    double c_ztilde_x = 0.0;
};
ZTildeCoords transform_z_to_ztilde(double s_z, double s_x, double c_zx,
                                   double df_dphix);

/// Loop-arm geometry for the surface-spin flux-noise model: a loop arm of
/// length l and width w carries 1-Hz power B*l/w.
struct LoopArm {
    std::string name;  // one of "red", "blue", "yellow"
    double length = 0.0;
    double width = 0.0;
};
struct LoopGeometry {
    std::vector<LoopArm> arms;
    double b_coeff = 0.0;  // Phi0^2/Hz per unit l/w
};

/// 1-Hz powers predicted from the geometry, in both coordinate systems.
struct GeometryNoise {
    double a_zprime = 0.0;
    double a_x = 0.0;
    double c_zprime_x = 0.0;  // signed cross power
    double a_z = 0.0;
    double c_zx_power = 0.0;  // signed cross power in z coordinates
    double czx_coeff = 0.0;   // dimensionless correlation coefficient
};
GeometryNoise geometry_model(const LoopGeometry& geom);

}  // namespace fluxdec
