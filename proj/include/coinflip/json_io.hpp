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

#include "coinflip/qmatrix.hpp"

namespace coinflip {

// Complex numbers travel as [re, im]; matrices as row lists of those pairs.

Complex complex_from_json(const nlohmann::json& j);
Vector vector_from_json(const nlohmann::json& j);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json complex_to_json(const Complex& z);
nlohmann::json vector_to_json(const Vector& v);
nlohmann::json matrix_to_json(const Matrix& m);

/// Parse a whole document, mapping library exceptions to ParseError.
nlohmann::json parse_json_text(const std::string& text);
nlohmann::json load_json_file(const std::string& path);

} // namespace coinflip
