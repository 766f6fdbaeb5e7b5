/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "coinflip/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "coinflip/errors.hpp"

namespace coinflip {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

namespace {

void print_value(const nlohmann::ordered_json& j, int indent, std::string& out) {
  const std::string pad(static_cast<size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
  case nlohmann::ordered_json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    size_t n = 0;
    for (const auto& [key, value] : j.items()) {
      out += inner + nlohmann::ordered_json(key).dump() + ": ";
      print_value(value, indent + 1, out);
      out += ++n < j.size() ? ",\n" : "\n";
    }
    out += pad + "}";
    return;
  }
  case nlohmann::ordered_json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (size_t n = 0; n < j.size(); ++n) {
      out += inner;
      print_value(j[n], indent + 1, out);
      out += n + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "]";
    return;
  }
  case nlohmann::ordered_json::value_t::number_float: {
    const double v = j.get<double>();
    out += std::isfinite(v) ? format_double(v) : "null";
    return;
  }
  default:
    out += j.dump();
    return;
  }
}

} // namespace

std::string json_to_text(const nlohmann::ordered_json& j) {
  std::string out;
  print_value(j, 0, out);
  out += "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot create file: " + path);
  }
  out << text;
  if (!out) {
    throw ParseError("failed writing file: " + path);
  }
}

} // namespace coinflip
