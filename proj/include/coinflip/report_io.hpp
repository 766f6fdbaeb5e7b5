/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <json.hpp>
#include <string>

namespace coinflip {

inline constexpr const char* kVersion = "0.1.0";

/// Floats in reports carry 12 significant digits ("%.12g").
std::string format_double(double value);

/// Deterministic pretty-printer: key order as inserted, floats through
/// format_double, non-finite numbers as null, trailing newline.
std::string json_to_text(const nlohmann::ordered_json& j);

/// Writes `text` to `path`, throwing ParseError when the file cannot be
/// created.
void write_text_file(const std::string& path, const std::string& text);

} // namespace coinflip
