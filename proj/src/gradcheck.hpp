// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "message.hpp"

namespace softhg {

// Central differences (L(t+e_i*step) - L(t-e_i*step)) / (2*step).
// Throws NumericError naming the coordinate if the loss goes non-finite.
std::vector<double> finite_diff(const std::function<double(std::span<const double>)>& loss,
                                std::span<const double> theta, double step);

struct TensorStat {
  std::string name;
  double max_rel = 0.0;
  double max_abs = 0.0;
  size_t worst_index = 0;
};

struct CaseReport {
  NormMode norm = NormMode::kENorm;
  bool residual = true;
  std::vector<TensorStat> tensors;  // every parameter tensor plus the input
  bool passed = true;
};

struct GradReport {
  std::vector<CaseReport> cases;
  double tolerance = 1e-4;
  bool passed = true;
  std::string worst_name;
  double worst_rel = 0.0;

  std::string to_text() const;  // aligned table
  std::string to_json() const;
};

struct GradCheckConfig {
  size_t n = 5;
  size_t d = 4;
  size_t m = 3;
  size_t heads = 2;
  size_t phi_hidden = 0;
  Activation activation = Activation::kRelu;
  double step = 1e-5;
  double tolerance = 1e-4;
  // all norm modes are checked, each with residual on and off (residual off
  // only when the shapes allow turning it on at all)
};

// Compares softhgnn_backward against central differences for every parameter
// tensor and the input, under loss L = sum of squared block outputs. Inputs
// are seeded and redrawn (deterministically) if any activation or max-pool
// margin sits too close to a kink for the step size.
// `corrupt` mutates the analytic gradients before comparison; the fault
// injection test uses it.
GradReport check_block(const GradCheckConfig& cfg, uint64_t seed,
                       const std::function<void(BlockGrads&)>& corrupt = nullptr);

}  // namespace softhg
