// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "annealing.hpp"
#include "decoherence.hpp"
#include "estimation.hpp"
#include "noise_psd.hpp"
#include "qubit_model.hpp"
#include "resonator.hpp"

namespace fluxdec {

struct ChannelToggles {
    bool flux_z_1f = true;
    bool flux_x_1f = true;
    bool biasline_z = true;
    bool biasline_x = false;
    bool purcell = true;
    bool ohmic_flux_z = false;
    bool ohmic_flux_x = false;
    bool ohmic_charge = false;
    bool source_z = false;
    bool source_x = false;
    bool critical_current = false;
    bool shot_noise = false;
    bool second_order_flux = true;
};

struct CriticalCurrentParams {
    double a_ic = 4e-6;           // normalized 1-Hz power, 1/Hz
    double dln_delta_dln_ic = -2.0;
    double dln_ip_dln_ic = 1.0;
};

struct ShotNoiseParams {
    double chi_disp = 0.0;  // dispersive shift, rad/s
    double nbar = 0.0;
};

struct OhmicParams {
    Ohmic flux_z{};  // Phi0^2/Hz / (rad/s)^gamma coefficients
    Ohmic flux_x{};
    Ohmic charge{};  // effective: 2*S directly adds to 1/T1
};

struct SweepSettings {
    enum class Axis { phi_z, phi_x, delta };
    Axis axis = Axis::phi_z;
    double min = 0.0;
    double max = 0.0;
    int samples = 1;
    double phi_x = 0.0;                 // fixed X bias for a phi_z sweep
    std::optional<double> phi_z;        // fixed Z bias; absent = track symmetry
    double phi_z_offset = 0.0;          // added when tracking symmetry
};

struct AnnealSettings {
    int samples = 41;
    double phi_x_start = 0.0;
    double phi_x_end = 0.0;
    double phi_z_offset = 0.0;
};

struct ValidateSettings {
    double dt = 1e-9;
    int n_samples = 8192;
    int n_traces = 1000;
    std::uint64_t seed = 1;
    double tolerance = 0.10;
    std::optional<double> alpha_mc;  // override the MC target exponent (diagnostics)
};

struct BiasSettings {
    double phi_x = 0.0;
    std::optional<double> phi_z;  // absent = symmetry point + offset
    double phi_z_offset = 0.0;
};

/// Fully validated, immutable model. Built by the config layer.
struct Model {
    explicit Model(QubitCurves c) : curves(std::move(c)) {}

    QubitCurves curves;
    ResonatorParams resonator;
    SquidParams squid;
    FluxNoiseSpec noise;
    double a_z_1f = 0.0;  // intrinsic 1-Hz powers, Phi0^2/Hz
    double a_x_1f = 0.0;
    ChannelToggles channels;
    CriticalCurrentParams critical_current;
    ShotNoiseParams shot_noise;
    OhmicParams ohmic;
    DephasingModelParams dephasing;
    BiasSettings bias;
    SweepSettings sweep;
    AnnealSettings anneal;
    ValidateSettings validate;
    std::optional<LoopGeometry> geometry;

    FluxBias resolve_bias() const;
};

struct T1ChannelReport {
    std::string name;
    double gamma = 0.0;               // 1/s
    std::optional<double> t1;         // s
    std::optional<double> fraction;   // of the total rate
};

struct DephasingChannelReport {
    std::string name;
    double gamma_ramsey = 0.0;
    double gamma_echo = 0.0;
    std::optional<double> t_ramsey;
    std::optional<double> t_echo;
};

struct ResonatorDerived {
    double phi_j = 0.0;
    double l_sq = 0.0;
    double i_b0 = 0.0;
    double r1 = 0.0;
    double g = 0.0;  // rad/s
};

struct CoherenceBudget {
    FluxBias bias;
    QubitPoint point;
    ResonatorDerived resonator;

    std::vector<T1ChannelReport> t1_channels;
    double t1_total_rate = 0.0;
    std::optional<double> t1_total;

    std::vector<DephasingChannelReport> dephasing_channels;
    std::optional<double> tphi_ramsey_closed_form;
    std::optional<double> tphi_echo_closed_form;
    std::optional<double> tphi_ramsey_quadrature;
    std::optional<double> tphi_echo_quadrature;
    std::optional<double> tphi_ramsey_total;
    std::optional<double> tphi_echo_total;

    AnnealNoisePoint anneal;
    std::optional<GeometryNoise> geometry_prediction;
    std::vector<std::pair<double, double>> envelope_ramsey;
    std::vector<std::pair<double, double>> envelope_echo;
};

struct BudgetOptions {
    bool with_quadrature = true;  // full filter-integral totals and envelopes
    int envelope_samples = 96;
};

CoherenceBudget compute_budget(const Model& model, const FluxBias& bias,
                               const BudgetOptions& options = {});

std::string budget_json(const CoherenceBudget& b);
std::string budget_text(const CoherenceBudget& b);
std::string envelope_csv(const std::vector<std::pair<double, double>>& env);

std::string run_sweep_csv(const Model& model);
std::string run_anneal_csv(const Model& model);

struct ValidationOutcome {
    bool pass = true;
    std::string ramsey_csv;
    std::string echo_csv;
    std::string summary_json;
};
ValidationOutcome run_validation(const Model& model);

/// Closed-form dephasing times from the intrinsic 1/f flux noise (plus
/// critical-current 1/f when enabled); Ramsey uses the self-consistent
/// infrared cutoff. Exposed for sweeps and argmax scans.
struct ClosedFormTphi {
    std::optional<double> ramsey;
    std::optional<double> echo;
};
ClosedFormTphi closed_form_tphi(const Model& model, const QubitPoint& point,
                                double phi_x);

}  // namespace fluxdec
