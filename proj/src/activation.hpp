// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "matrix.hpp"

namespace softhg {

enum class Activation { kRelu, kGelu, kIdentity };
enum class NormMode { kENorm, kVNorm, kNone };

inline double activate(Activation act, double z) {
  switch (act) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kGelu:
      return 0.5 * z * (1.0 + std::erf(z / std::numbers::sqrt2));
    case Activation::kIdentity:
      return z;
  }
  return z;
}

// derivative w.r.t. the pre-activation; relu'(0) is defined as 0
inline double activate_grad(Activation act, double z) {
  switch (act) {
    case Activation::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kGelu: {
      const double cdf = 0.5 * (1.0 + std::erf(z / std::numbers::sqrt2));
      const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
      return cdf + z * pdf;
    }
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

inline Matrix activate(Activation act, const Matrix& z) {
  Matrix out(z.rows(), z.cols());
  for (size_t i = 0; i < z.size(); ++i) out.data()[i] = activate(act, z.data()[i]);
  return out;
}

// upstream ⊙ σ'(pre)
inline Matrix activate_backward(Activation act, const Matrix& pre, const Matrix& upstream) {
  if (pre.rows() != upstream.rows() || pre.cols() != upstream.cols()) {
    throw ShapeError("activate_backward: shape mismatch: " + pre.shape_str() +
                     " vs " + upstream.shape_str());
  }
  Matrix out(pre.rows(), pre.cols());
  for (size_t i = 0; i < pre.size(); ++i)
    out.data()[i] = upstream.data()[i] * activate_grad(act, pre.data()[i]);
  return out;
}

std::string to_string(Activation act);
std::string to_string(NormMode mode);
Activation activation_from_string(const std::string& name);
NormMode norm_mode_from_string(const std::string& name);

}  // namespace softhg
