// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include "smoe/matrix.hpp"
#include "smoe/model.hpp"

namespace smoe {

/// {"rows": r, "cols": c, "data": [row-major entries]}
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// {"d", "T", "k", "router": [matrices], "experts": [[matrices], ...]}. Doubles are written in their
/// shortest round-trip decimal form, so parsing restores every parameter bit for bit.
nlohmann::json model_to_json(const SMoEModel& model);
SMoEModel model_from_json(const nlohmann::json& j);

std::string dump_model(const SMoEModel& model);
SMoEModel parse_model(const std::string& text);

}  // namespace smoe
