// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "mc_noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "constants.hpp"
#include "numerics.hpp"

namespace fluxdec {

namespace {

// Deterministic standard normal from an mt19937_64 stream (Box-Muller);
// avoids the implementation-defined std::normal_distribution.
class Gaussian {
  public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        have_ = true;
        return r * std::cos(kTwoPi * u2);
    }

  private:
    double uniform() {
        return (rng_() >> 11) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
    bool have_ = false;
    double spare_ = 0.0;
};

}  // namespace

NoiseEnsemble::NoiseEnsemble(const EnsembleSpec& spec) : spec_(spec) {
    if (!(spec_.dt > 0.0) || spec_.n_samples < 2 || spec_.n_traces < 1) {
        throw std::domain_error("invalid ensemble spec");
    }
    const double omega_max = kPi / spec_.dt;
    if (!(spec_.omega_low > 0.0 && spec_.omega_low < omega_max)) {
        throw std::domain_error("omega_low must lie inside (0, pi/dt)");
    }
    const double decades = std::log10(omega_max / spec_.omega_low);
    const int n_bins = std::max(8, static_cast<int>(std::ceil(decades * spec_.bins_per_decade)));
    omega_.reserve(n_bins);
    sigma_.reserve(n_bins);
    const double ratio = std::pow(omega_max / spec_.omega_low, 1.0 / n_bins);
    double lo = spec_.omega_low;
    for (int j = 0; j < n_bins; ++j) {
        const double hi = (j == n_bins - 1) ? omega_max : lo * ratio;
        // Bin variance (1/pi) Int S+(w) dw; autocorrelation of the sum then
        // reproduces (1/pi) Int S+(w) cos(w dt) dw as bins densify.
        const double var = integrate([&](double w) { return psd_eval(spec_.target, w); },
                                     lo, hi, 1e-9) / kPi;
        if (!(var >= 0.0) || !std::isfinite(var)) {
            throw std::domain_error("target PSD not integrable over the synthesis band");
        }
        omega_.push_back(std::sqrt(lo * hi));  // log-midpoint
        sigma_.push_back(std::sqrt(var));
        lo = hi;
    }
}

double NoiseEnsemble::total_variance() const {
    double v = 0.0;
    for (double s : sigma_) v += s * s;
    return v;
}

void NoiseEnsemble::coefficients(int trace_index, std::vector<double>& a,
                                 std::vector<double>& b) const {
    std::uint64_t state = spec_.seed;
    // Mix the trace index into the master seed; one independent stream per trace.
    state ^= 0x632be59bd9b4e019ULL * (static_cast<std::uint64_t>(trace_index) + 1);
    const std::uint64_t trace_seed = splitmix64(state);
    Gaussian gauss(trace_seed);
    const int m = n_components();
    a.resize(m);
    b.resize(m);
    for (int j = 0; j < m; ++j) {
        a[j] = sigma_[j] * gauss();
        b[j] = sigma_[j] * gauss();
    }
}

std::vector<double> NoiseEnsemble::sample_trace(int trace_index) const {
    std::vector<double> a, b;
    coefficients(trace_index, a, b);
    const int m = n_components();
    std::vector<double> x(spec_.n_samples, 0.0);
    // Per-component phase rotation recurrence on the uniform grid.
    for (int j = 0; j < m; ++j) {
        const double c = std::cos(omega_[j] * spec_.dt);
        const double s = std::sin(omega_[j] * spec_.dt);
        double cj = 1.0, sj = 0.0;  // cos/sin of omega_j * t
        for (int i = 0; i < spec_.n_samples; ++i) {
            x[i] += a[j] * cj + b[j] * sj;
            const double cn = cj * c - sj * s;
            sj = sj * c + cj * s;
            cj = cn;
        }
    }
    return x;
}

std::vector<double> NoiseEnsemble::phases(int protocol, double sensitivity,
                                          const std::vector<double>& taus) const {
    if (protocol != 0 && protocol != 1) throw std::domain_error("protocol must be 0 or 1");
    const double duration = spec_.dt * spec_.n_samples;
    for (double tau : taus) {
        if (!(tau > 0.0 && tau <= duration)) {
            throw std::domain_error("tau outside the trace duration");
        }
    }
    const int m = n_components();
    const int nt = static_cast<int>(taus.size());
    // Closed-form integral weights per (component, tau):
    // Ramsey: Int_0^tau cos = sin(wt)/w, Int_0^tau sin = (1-cos(wt))/w;
    // echo flips the sign of the second half.
    std::vector<double> wa(m * nt), wb(m * nt);
    for (int j = 0; j < m; ++j) {
        const double w = omega_[j];
        for (int k = 0; k < nt; ++k) {
            const double z = w * taus[k];
            if (protocol == 0) {
                wa[j * nt + k] = std::sin(z) / w;
                wb[j * nt + k] = (1.0 - std::cos(z)) / w;
            } else {
                wa[j * nt + k] = (2.0 * std::sin(0.5 * z) - std::sin(z)) / w;
                wb[j * nt + k] = (1.0 - 2.0 * std::cos(0.5 * z) + std::cos(z)) / w;
            }
        }
    }
    std::vector<double> out(static_cast<std::size_t>(spec_.n_traces) * nt, 0.0);
    std::vector<double> a, b;
    for (int t = 0; t < spec_.n_traces; ++t) {
        coefficients(t, a, b);
        double* row = out.data() + static_cast<std::size_t>(t) * nt;
        for (int j = 0; j < m; ++j) {
            const double aj = sensitivity * a[j];
            const double bj = sensitivity * b[j];
            const double* wrow_a = wa.data() + j * nt;
            const double* wrow_b = wb.data() + j * nt;
            for (int k = 0; k < nt; ++k) {
                row[k] += aj * wrow_a[k] + bj * wrow_b[k];
            }
        }
    }
    return out;
}

std::vector<DecaySample> simulate_decay(const NoiseEnsemble& ensemble, int protocol,
                                        double sensitivity,
                                        const std::vector<double>& taus) {
    const auto phases = ensemble.phases(protocol, sensitivity, taus);
    const int nt = static_cast<int>(taus.size());
    const int n = ensemble.spec().n_traces;
    std::vector<DecaySample> out(nt);
    for (int k = 0; k < nt; ++k) {
        double sc = 0.0, ss = 0.0, sc2 = 0.0, ss2 = 0.0;
        for (int t = 0; t < n; ++t) {
            const double phi = phases[static_cast<std::size_t>(t) * nt + k];
            const double c = std::cos(phi);
            const double s = std::sin(phi);
            sc += c;
            ss += s;
            sc2 += c * c;
            ss2 += s * s;
        }
        const double mc = sc / n;
        const double ms = ss / n;
        out[k].tau = taus[k];
        out[k].envelope = std::hypot(mc, ms);
        const double var_c = std::max(sc2 / n - mc * mc, 0.0);
        const double var_s = std::max(ss2 / n - ms * ms, 0.0);
        out[k].stderr_ = std::sqrt((var_c + var_s) / n);
    }
    return out;
}

double envelope_one_over_e_time(const std::vector<DecaySample>& samples) {
    const double target = std::exp(-1.0);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double e0 = samples[i - 1].envelope;
        const double e1 = samples[i].envelope;
        if (e0 >= target && e1 < target) {
            const double l0 = std::log(std::max(e0, 1e-300));
            const double l1 = std::log(std::max(e1, 1e-300));
            const double f = (-1.0 - l0) / (l1 - l0);
            return samples[i - 1].tau + f * (samples[i].tau - samples[i - 1].tau);
        }
    }
    throw std::domain_error("envelope does not cross 1/e on the sampled range");
}

}  // namespace fluxdec
