// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "generation.hpp"

#include <cmath>

#include "errors.hpp"

namespace softhg {

PoolTrace global_context(const Matrix& x) {
  if (x.rows() == 0) throw ShapeError("global_context: empty input (0 vertices)");
  PoolTrace trace;
  std::vector<double> means = col_means(x);
  std::vector<double> maxes;
  col_max_argmax(x, maxes, trace.max_rows);
  trace.f_global = std::move(means);
  trace.f_global.insert(trace.f_global.end(), maxes.begin(), maxes.end());
  return trace;
}

Matrix dynamic_prototypes(const SoftHGParams& params, const std::vector<double>& f_global,
                          PhiTrace* trace) {
  const size_t d = params.dim();
  const size_t m = params.hyperedges();
  if (f_global.size() != 2 * d) {
    throw ShapeError("dynamic_prototypes: context vector has length " +
                     std::to_string(f_global.size()) + ", expected " + std::to_string(2 * d));
  }
  Matrix act(1, 2 * d, std::vector<double>(f_global));
  for (size_t l = 0; l < params.phi.size(); ++l) {
    const auto& layer = params.phi[l];
    if (trace) trace->inputs.push_back(act);
    Matrix pre = add(matmul(act, layer.w), layer.b);
    if (l + 1 < params.phi.size()) {
      if (trace) trace->hidden_pre.push_back(pre);
      act = activate(params.activation, pre);
    } else {
      act = std::move(pre);  // output layer is affine: offsets may be negative
    }
  }
  Matrix p(m, d);
  for (size_t e = 0; e < m; ++e)
    for (size_t c = 0; c < d; ++c) p(e, c) = params.p0(e, c) + act(0, e * d + c);
  return p;
}

Matrix participation_scores(const Matrix& x, const Matrix& prototypes,
                            const SoftHGParams& params, Matrix* x_proj_out) {
  const size_t d = params.dim();
  if (x.cols() != d) {
    throw ShapeError("participation_scores: vertices are " + x.shape_str() +
                     ", prototypes expect " + std::to_string(d) + " columns");
  }
  if (prototypes.cols() != d) {
    throw ShapeError("participation_scores: prototypes are " + prototypes.shape_str() +
                     ", expected " + std::to_string(d) + " columns");
  }
  const size_t d_head = params.head_dim();
  Matrix x_proj = matmul(x, params.w_pre);
  // Averaging the per-head scaled dot products equals one full dot product
  // scaled by 1/(h*sqrt(D/h)); the per-head loop oracle in the test suite
  // checks this equivalence.
  const double scale = 1.0 / (static_cast<double>(params.heads) *
                              std::sqrt(static_cast<double>(d_head)));
  Matrix s = scaled(matmul_nt(x_proj, prototypes), scale);
  if (x_proj_out) *x_proj_out = std::move(x_proj);
  return s;
}

Participation normalize(const Matrix& s, NormMode mode) {
  Participation part;
  part.mode = mode;
  part.s_raw = s;
  switch (mode) {
    case NormMode::kENorm:
      part.a = softmax_cols(s);
      break;
    case NormMode::kVNorm:
      part.a = softmax_rows(s);
      break;
    case NormMode::kNone:
      part.a = s;
      break;
  }
  return part;
}

}  // namespace softhg
