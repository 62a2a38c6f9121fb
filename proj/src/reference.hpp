// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "message.hpp"

namespace softhg {

// Element-wise reimplementations of the block math, kept deliberately
// independent of the matrix-form production path: scalar loops only, own
// softmax, no shared kernels. They exist so the two routes can be checked
// against each other, from the test suite and from the `oracle` subcommand.

Matrix ref_matmul(const Matrix& a, const Matrix& b);

// per-hyperedge aggregation then transform, one scalar sum at a time
Matrix ref_aggregate_v_to_e(const Matrix& a, const Matrix& x, const Matrix& w_e,
                            Activation act);
// per-vertex dissemination then transform
Matrix ref_disseminate_e_to_v(const Matrix& a, const Matrix& f_e_act, const Matrix& w_n,
                              Activation act);

// straight-line scalar evaluation of the whole block, pooling through
// residual, including the per-head score loop
Matrix ref_softhgnn_forward(const Matrix& x, const SoftHGParams& params);

struct OracleResult {
  size_t instances = 0;
  double worst_aggregate = 0.0;
  double worst_disseminate = 0.0;
  double worst_forward = 0.0;
  double worst() const;
  std::string summary() const;
};

// Seeded random instances with N,M <= 16, D <= 8, heads in {1,2}, cycling
// through all normalization modes and residual settings.
OracleResult run_oracle_suite(uint64_t seed, size_t instances);

}  // namespace softhg
