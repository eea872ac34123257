// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace fluxdec {

// Config parse / schema / range problem. Maps to FLUXDEC_ERR_CONFIG.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or insufficient dataset. Maps to FLUXDEC_ERR_DATA.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Solver or fit failed to converge. Maps to FLUXDEC_ERR_CONVERGENCE.
class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fluxdec
