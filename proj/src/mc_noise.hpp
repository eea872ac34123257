// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "noise_psd.hpp"

namespace fluxdec {

/// Spectral-synthesis ensemble specification. Traces are band-limited to
/// [omega_low, pi/dt]; n_samples * dt is the usable trace duration.
struct EnsembleSpec {
    double dt = 1e-9;            // s
    int n_samples = 8192;
    int n_traces = 1000;
    std::uint64_t seed = 1;
    double omega_low = 62.83185307179586;  // rad/s
    int bins_per_decade = 48;
    PsdModel target = OneOverF{};
};

/// Gaussian noise ensemble with exactly controlled PSD: per frequency bin j,
/// x(t) = sum_j a_j cos(w_j t) + b_j sin(w_j t) with Var a_j = Var b_j =
/// (1/pi) * Int_bin S+(w) dw. Coefficients are drawn per trace from
/// independent streams derived from the master seed, so results do not
/// depend on scheduling.
class NoiseEnsemble {
  public:
    explicit NoiseEnsemble(const EnsembleSpec& spec);

    const EnsembleSpec& spec() const { return spec_; }
    int n_components() const { return static_cast<int>(omega_.size()); }
    double total_variance() const;

    /// Time series of one trace on the dt grid (n_samples points).
    std::vector<double> sample_trace(int trace_index) const;

    /// Ramsey (n=0) or echo (n=1) accumulated phase per trace at each tau,
    /// for a frequency-noise sensitivity in (rad/s) per noise unit. The time
    /// integrals of every spectral component are evaluated in closed form.
    /// Result layout: phase[trace * n_taus + k].
    std::vector<double> phases(int protocol, double sensitivity,
                               const std::vector<double>& taus) const;

  private:
    void coefficients(int trace_index, std::vector<double>& a,
                      std::vector<double>& b) const;

    EnsembleSpec spec_;
    std::vector<double> omega_;   // component angular frequencies
    std::vector<double> sigma_;   // per-component standard deviations
};

struct DecaySample {
    double tau = 0.0;
    double envelope = 0.0;
    double stderr_ = 0.0;
};

/// |< exp(i phi) >| over traces with its standard error, at each tau.
std::vector<DecaySample> simulate_decay(const NoiseEnsemble& ensemble, int protocol,
                                        double sensitivity,
                                        const std::vector<double>& taus);

/// 1/e crossing of a sampled envelope by log-linear interpolation.
double envelope_one_over_e_time(const std::vector<DecaySample>& samples);

}  // namespace fluxdec
