// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "params.hpp"

namespace softhg {

// Continuous participation matrix with its normalization tag. s_raw keeps the
// pre-softmax scores; sparse hyperedge selection ranks on those.
struct Participation {
  Matrix a;       // N×M_active
  NormMode mode = NormMode::kENorm;
  Matrix s_raw;   // N×M
};

// Mean/max pooling over vertices. The trace keeps the argmax row per feature
// dimension (first row wins ties) for the backward pass.
struct PoolTrace {
  std::vector<double> f_global;      // [col means | col maxes], length 2D
  std::vector<size_t> max_rows;      // length D
};

PoolTrace global_context(const Matrix& x);

// Intermediates of the offset network needed by backward: the input of each
// layer (1×in) and the pre-activation of each hidden layer.
struct PhiTrace {
  std::vector<Matrix> inputs;
  std::vector<Matrix> hidden_pre;
};

// P = P0 + reshape(phi(f_global)); the flattened offsets are hyperedge-major
// (the first D outputs belong to hyperedge 0).
Matrix dynamic_prototypes(const SoftHGParams& params, const std::vector<double>& f_global,
                          PhiTrace* trace = nullptr);

// Head-averaged scaled dot-product scores between the pre-projected vertices
// and the prototypes: S[i,m] = (1/h) * sum_heads <x_proj_head, p_head> / sqrt(D/h).
// x_proj_out, when given, receives X*W_pre for the backward cache.
Matrix participation_scores(const Matrix& x, const Matrix& prototypes,
                            const SoftHGParams& params, Matrix* x_proj_out = nullptr);

Participation normalize(const Matrix& s, NormMode mode);

}  // namespace softhg
