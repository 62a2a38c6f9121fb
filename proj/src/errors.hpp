// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace softhg {

// Operand shapes are inconsistent. Messages always name the offending shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Invalid configuration value (head count, top-k size, sweep definition, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Non-finite values or degenerate numeric structure (zero degree, diverged loss).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File read/write or parse failure.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace softhg
