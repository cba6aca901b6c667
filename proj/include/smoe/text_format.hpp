// Copyright (c) 2026, smoe-bounds contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace smoe {

/// Decimal rendering with 17 significant digits (printf "%.17g"); parses back to the identical double.
std::string format_real(double v);

/// Strict decimal parse; the whole token must be consumed.
double parse_real(std::string_view token);
long long parse_integer(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

}  // namespace smoe
