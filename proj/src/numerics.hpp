// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <functional>

namespace fluxdec {

/// Adaptive Gauss-Kronrod 15(7) quadrature on a finite interval.
/// Subdivides until |GK15 - G7| per interval meets the combined tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, double abs_tol = 0.0, int max_depth = 52);

/// Brent root finder; requires f(a) and f(b) of opposite sign.
double brent_root(const std::function<double(double)>& f, double a, double b,
                  double rel_tol = 1e-14, int max_iter = 200);

/// Golden-section minimization of a unimodal function on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b,
                  double x_tol, int max_iter = 400);

/// Linear solve of a small dense system (Gaussian elimination, partial
/// pivoting). `a` is row-major n*n, `b` length n; the solution overwrites `b`.
/// Returns false if a pivot falls below `pivot_tol` times the matrix scale.
bool solve_dense(int n, double* a, double* b, double pivot_tol = 1e-13);

/// SplitMix64 step; used for deriving per-trace RNG seeds from a master seed.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace fluxdec
