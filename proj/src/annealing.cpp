// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#include "annealing.hpp"

#include <cmath>
#include <stdexcept>

namespace fluxdec {

AnnealNoisePoint anneal_noise(const QubitPoint& point, double a_z, double a_x,
                              double c_zx) {
    if (!(a_z >= 0.0 && a_x >= 0.0)) throw std::domain_error("noise powers must be >= 0");
    if (!(std::abs(c_zx) <= 1.0)) throw std::domain_error("|c_zx| must be <= 1");
    const double ez = point.d_eps_d_phi_z;
    const double ex = point.d_eps_d_phi_x;
    const double dx = point.d_delta_d_phi_x;
    const double a_zx = c_zx * std::sqrt(a_z * a_x);

    AnnealNoisePoint out;
    out.delta = point.delta;
    out.eps = point.epsilon;
    out.a_eps = ez * ez * a_z + ex * ex * a_x + 2.0 * ez * ex * a_zx;
    out.a_delta = dx * dx * a_x;
    out.a_delta_eps = ez * dx * a_zx + ex * dx * a_x;
    return out;
}

std::vector<AnnealScheduleRow> anneal_schedule(const QubitCurves& curves,
                                               double phi_x_start, double phi_x_end,
                                               double phi_z_offset, int samples,
                                               double a_z, double a_x, double c_zx) {
    if (samples < 1) throw std::domain_error("schedule needs at least one sample");
    std::vector<AnnealScheduleRow> rows;
    rows.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double s = samples == 1 ? 0.0 : double(i) / (samples - 1);
        const double phi_x = phi_x_start + (phi_x_end - phi_x_start) * s;
        const double phi_z = symmetry_point(curves, phi_x) + phi_z_offset;
        const QubitPoint p = compute_point(curves, FluxBias{phi_z, phi_x});
        rows.push_back({s, anneal_noise(p, a_z, a_x, c_zx)});
    }
    return rows;
}

}  // namespace fluxdec
