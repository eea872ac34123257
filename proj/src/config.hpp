// Copyright (c) 2026 the fluxdec authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "budget.hpp"

namespace fluxdec {

/// Parse JSON text; ConfigError on syntax problems (with byte offset).
nlohmann::json parse_config_text(const std::string& text);
nlohmann::json parse_config_file(const std::string& path);

/// Apply a dotted-path override, value given as JSON text.
void apply_override(nlohmann::json& config, const std::string& dotted_path,
                    const std::string& value_json);

/// Validate against the full schema (unknown keys rejected, ranges checked,
/// cross-field consistency enforced) and build the immutable model.
Model build_model(const nlohmann::json& config);

}  // namespace fluxdec
