// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qubit_model.hpp"

namespace fluxdec {

/// 1-Hz noise powers of the annealing parameters (epsilon, Delta) at one
/// schedule point, (rad/s)^2/Hz; a_delta_eps is the signed cross power.
struct AnnealNoisePoint {
    double delta = 0.0;  // rad/s
    double eps = 0.0;    // rad/s
    double a_eps = 0.0;
    double a_delta = 0.0;
    double a_delta_eps = 0.0;
};

/// Propagates flux-noise powers (Phi0^2/Hz at 1 Hz) through the two-level
/// sensitivities: A_eps, A_Delta and the correlated A_Delta_eps with
/// A_zx = c_zx sqrt(A_z A_x).
AnnealNoisePoint anneal_noise(const QubitPoint& point, double a_z, double a_x,
                              double c_zx);

struct AnnealScheduleRow {
    double s = 0.0;  // schedule parameter in [0, 1]
    AnnealNoisePoint noise;
};

/// Evaluates the noise triple along a linear phi_x path from phi_x_start to
/// phi_x_end, with phi_z tracking the symmetry point plus a fixed offset.
std::vector<AnnealScheduleRow> anneal_schedule(const QubitCurves& curves,
                                               double phi_x_start, double phi_x_end,
                                               double phi_z_offset, int samples,
                                               double a_z, double a_x, double c_zx);

}  // namespace fluxdec
