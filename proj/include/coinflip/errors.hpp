/*
 * This code is part of coinflip-lab.
 *
 * (C) Copyright 2026, coinflip-lab contributors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace coinflip {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed external input: unreadable files, bad JSON, bad flag values.
/// The CLI maps this to exit code 2.
class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

/// A mathematical precondition or invariant failed: non-unit state,
/// non-Hermitian input, dimension mismatch, ownership violation, eigenvalue
/// below the clipping floor. The CLI maps this to exit code 3.
class InvariantError : public Error {
public:
  explicit InvariantError(const std::string& what) : Error(what) {}
};

} // namespace coinflip
