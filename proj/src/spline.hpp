// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace fluxdec {

/// Natural cubic spline through strictly increasing nodes. C2-continuous,
/// which the sensitivity chain rule relies on: analytic and finite-difference
/// derivatives of interpolated curves must agree through second order.
class CubicSpline {
  public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double value(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }
    bool contains(double x) const { return x >= x_.front() && x <= x_.back(); }
    std::size_t size() const { return x_.size(); }

  private:
    std::size_t segment(double x) const;  // throws std::out_of_range outside [x_min, x_max]

    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> m_;  // second derivatives at the nodes, natural ends
};

}  // namespace fluxdec
