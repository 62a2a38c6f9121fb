// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "generation.hpp"
#include "params.hpp"
#include "ses.hpp"

namespace softhg {

// Which dynamic hyperedges a sparse-selection forward pass kept.
struct SesSelection {
  size_t m_fixed = 0;
  std::vector<size_t> selected;  // ascending indices into the dynamic slice
};

// Every intermediate the backward pass needs. One cache belongs to exactly
// one forward pass.
struct BlockCache {
  Matrix x;                  // N×D input
  PoolTrace pool;
  PhiTrace phi;
  Matrix prototypes;         // M×D
  Matrix x_proj;             // N×D
  Matrix s_full;             // N×M raw scores
  Participation part;        // a: N×M_active
  std::optional<SesSelection> ses;
  Matrix f_e;                // M_active×D aggregated vertex features
  Matrix u_pre;              // M_active×D' pre-activation
  Matrix f_e_act;            // M_active×D'
  Matrix x_tilde;            // N×D' disseminated features
  Matrix v_pre;              // N×D'' pre-activation
  Matrix x_msg;              // N×D''
  bool residual_used = false;
};

struct BlockOutput {
  Matrix x_out;  // N×D''
  BlockCache cache;
};

// Gradient of a scalar loss w.r.t. every parameter tensor plus the input.
struct BlockGrads : ParamTensors {
  Matrix d_x;  // N×D
};

// V->E aggregation: F'_e = act((A^T X) W_e^T)
Matrix aggregate_v_to_e(const Matrix& a, const Matrix& x, const Matrix& w_e,
                        Activation act);
// E->V dissemination: X' = act((A F'_e) W_n^T)
Matrix disseminate_e_to_v(const Matrix& a, const Matrix& f_e_act, const Matrix& w_n,
                          Activation act);

// Full block: context pooling -> dynamic prototypes -> head-wise scores ->
// normalization -> V->E -> E->V (-> residual). Composes the component
// operations bit-for-bit.
BlockOutput softhgnn_forward(const Matrix& x, const SoftHGParams& params);

// Sparse-selection variant: only m_fixed + k columns take part in message
// passing; normalization of the active columns follows the column softmax.
// The selection is recorded in the cache; pass the running state separately
// to accumulate load-balancing statistics.
BlockOutput softhgnn_forward_ses(const Matrix& x, const SoftHGParams& params,
                                 const SeSConfig& cfg);

// Reverse pass through everything the forward touched, including softmax,
// pooling (mean + argmax-routed max) and activation derivatives.
BlockGrads softhgnn_backward(const BlockOutput& out, const SoftHGParams& params,
                             const Matrix& d_out);

}  // namespace softhg
