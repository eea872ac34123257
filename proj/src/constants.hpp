// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace fluxdec {

// CODATA values. Internal unit conventions: angular frequencies in rad/s,
// fluxes dimensionless in units of Phi0, temperatures in K, everything else SI.
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kPhi0 = 2.067833848e-15;      // Wb
inline constexpr double kPi = 3.141592653589793;
inline constexpr double kTwoPi = 6.283185307179586;

}  // namespace fluxdec
