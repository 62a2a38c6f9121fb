// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "message.hpp"

#include <cmath>

#include "errors.hpp"

namespace softhg {

Matrix aggregate_v_to_e(const Matrix& a, const Matrix& x, const Matrix& w_e,
                        Activation act) {
  if (a.rows() != x.rows()) {
    throw ShapeError("aggregate_v_to_e: participation is " + a.shape_str() +
                     ", vertices are " + x.shape_str());
  }
  Matrix f_e = matmul_tn(a, x);
  return activate(act, matmul_nt(f_e, w_e));
}

Matrix disseminate_e_to_v(const Matrix& a, const Matrix& f_e_act, const Matrix& w_n,
                          Activation act) {
  if (a.cols() != f_e_act.rows()) {
    throw ShapeError("disseminate_e_to_v: participation is " + a.shape_str() +
                     ", hyperedge features are " + f_e_act.shape_str());
  }
  return activate(act, matmul_nt(matmul(a, f_e_act), w_n));
}

namespace {

BlockOutput run_forward(const Matrix& x, const SoftHGParams& params,
                        const SeSConfig* ses_cfg) {
  params.validate();
  if (x.rows() == 0) throw ShapeError("softhgnn_forward: empty input (0 vertices)");
  if (x.cols() != params.dim()) {
    throw ShapeError("softhgnn_forward: input is " + x.shape_str() + ", block expects " +
                     std::to_string(params.dim()) + " columns");
  }

  BlockCache cache;
  cache.x = x;
  cache.pool = global_context(x);
  cache.prototypes = dynamic_prototypes(params, cache.pool.f_global, &cache.phi);
  cache.s_full = participation_scores(x, cache.prototypes, params, &cache.x_proj);

  if (ses_cfg) {
    ses_cfg->validate();
    if (ses_cfg->total() != params.hyperedges()) {
      throw ConfigError("selection split " + std::to_string(ses_cfg->m_fixed) + "+" +
                        std::to_string(ses_cfg->m_dyn) + " does not match " +
                        std::to_string(params.hyperedges()) + " hyperedges");
    }
    const size_t n = x.rows();
    Matrix s_fixed(n, ses_cfg->m_fixed);
    Matrix s_dyn(n, ses_cfg->m_dyn);
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < ses_cfg->m_fixed; ++j) s_fixed(i, j) = cache.s_full(i, j);
      for (size_t j = 0; j < ses_cfg->m_dyn; ++j)
        s_dyn(i, j) = cache.s_full(i, ses_cfg->m_fixed + j);
    }
    std::vector<double> g = activation_scores(s_dyn);
    SesSelection sel;
    sel.m_fixed = ses_cfg->m_fixed;
    sel.selected = select_topk(g, ses_cfg->k);
    cache.part = build_participation_ses(s_fixed, s_dyn, sel.selected);
    cache.ses = std::move(sel);
  } else {
    cache.part = normalize(cache.s_full, params.norm);
  }

  cache.f_e = matmul_tn(cache.part.a, x);
  cache.u_pre = matmul_nt(cache.f_e, params.w_e);
  cache.f_e_act = activate(params.activation, cache.u_pre);
  cache.x_tilde = matmul(cache.part.a, cache.f_e_act);
  cache.v_pre = matmul_nt(cache.x_tilde, params.w_n);
  cache.x_msg = activate(params.activation, cache.v_pre);
  cache.residual_used = params.residual;

  BlockOutput out;
  out.x_out = cache.residual_used ? add(x, cache.x_msg) : cache.x_msg;
  out.cache = std::move(cache);
  return out;
}

// d/dS of the column softmax: per column j, dS = a ⊙ (dA - <a, dA>).
Matrix softmax_cols_backward(const Matrix& a, const Matrix& d_a) {
  Matrix d_s(a.rows(), a.cols());
  for (size_t j = 0; j < a.cols(); ++j) {
    double dot = 0.0;
    for (size_t i = 0; i < a.rows(); ++i) dot += a(i, j) * d_a(i, j);
    for (size_t i = 0; i < a.rows(); ++i) d_s(i, j) = a(i, j) * (d_a(i, j) - dot);
  }
  return d_s;
}

Matrix softmax_rows_backward(const Matrix& a, const Matrix& d_a) {
  Matrix d_s(a.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    double dot = 0.0;
    for (size_t j = 0; j < a.cols(); ++j) dot += a(i, j) * d_a(i, j);
    for (size_t j = 0; j < a.cols(); ++j) d_s(i, j) = a(i, j) * (d_a(i, j) - dot);
  }
  return d_s;
}

}  // namespace

BlockOutput softhgnn_forward(const Matrix& x, const SoftHGParams& params) {
  return run_forward(x, params, nullptr);
}

BlockOutput softhgnn_forward_ses(const Matrix& x, const SoftHGParams& params,
                                 const SeSConfig& cfg) {
  return run_forward(x, params, &cfg);
}

BlockGrads softhgnn_backward(const BlockOutput& out, const SoftHGParams& params,
                             const Matrix& d_out) {
  const BlockCache& c = out.cache;
  const size_t n = c.x.rows();
  const size_t d = c.x.cols();
  if (d_out.rows() != n || d_out.cols() != params.out_dim()) {
    throw ShapeError("softhgnn_backward: upstream gradient is " + d_out.shape_str() +
                     ", output was " + out.x_out.shape_str());
  }
  if (!d_out.all_finite()) {
    throw NumericError("softhgnn_backward: non-finite upstream gradient");
  }

  BlockGrads grads;
  static_cast<ParamTensors&>(grads) = zeros_like(params);
  grads.d_x = Matrix(n, d);

  if (c.residual_used) add_inplace(grads.d_x, d_out);

  // dissemination: X' = act(X_tilde W_n^T), X_tilde = A F'_e
  Matrix d_v = activate_backward(params.activation, c.v_pre, d_out);
  grads.w_n = matmul_tn(d_v, c.x_tilde);
  Matrix d_x_tilde = matmul(d_v, params.w_n);
  Matrix d_a = matmul_nt(d_x_tilde, c.f_e_act);
  Matrix d_f_e_act = matmul_tn(c.part.a, d_x_tilde);

  // aggregation: F'_e = act(F_e W_e^T), F_e = A^T X
  Matrix d_u = activate_backward(params.activation, c.u_pre, d_f_e_act);
  grads.w_e = matmul_tn(d_u, c.f_e);
  Matrix d_f_e = matmul(d_u, params.w_e);
  add_inplace(d_a, matmul_nt(c.x, d_f_e));
  add_inplace(grads.d_x, matmul(c.part.a, d_f_e));

  // normalization of the active columns
  Matrix d_s_active;
  switch (c.part.mode) {
    case NormMode::kENorm:
      d_s_active = softmax_cols_backward(c.part.a, d_a);
      break;
    case NormMode::kVNorm:
      d_s_active = softmax_rows_backward(c.part.a, d_a);
      break;
    case NormMode::kNone:
      d_s_active = std::move(d_a);
      break;
  }

  // scatter active-column gradients back to the full score matrix; dropped
  // dynamic columns took no part in the pass and get zero
  Matrix d_s_full(n, c.s_full.cols());
  if (c.ses) {
    const size_t m_fixed = c.ses->m_fixed;
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < m_fixed; ++j) d_s_full(i, j) = d_s_active(i, j);
      for (size_t j = 0; j < c.ses->selected.size(); ++j)
        d_s_full(i, m_fixed + c.ses->selected[j]) = d_s_active(i, m_fixed + j);
    }
  } else {
    d_s_full = std::move(d_s_active);
  }

  // scores: S = scale * X_proj P^T
  const double scale = 1.0 / (static_cast<double>(params.heads) *
                              std::sqrt(static_cast<double>(params.head_dim())));
  Matrix d_x_proj = scaled(matmul(d_s_full, c.prototypes), scale);
  Matrix d_p = scaled(matmul_tn(d_s_full, c.x_proj), scale);

  // pre-projection: X_proj = X W_pre
  grads.w_pre = matmul_tn(c.x, d_x_proj);
  add_inplace(grads.d_x, matmul_nt(d_x_proj, params.w_pre));

  // prototypes: P = P0 + reshape(phi(f_global)), offsets hyperedge-major
  grads.p0 = d_p;
  const size_t m = params.hyperedges();
  Matrix d_act(1, m * d);
  for (size_t e = 0; e < m; ++e)
    for (size_t col = 0; col < d; ++col) d_act(0, e * d + col) = d_p(e, col);

  for (size_t l = params.phi.size(); l-- > 0;) {
    Matrix d_pre = (l + 1 == params.phi.size())
                       ? std::move(d_act)  // output layer is affine
                       : activate_backward(params.activation, c.phi.hidden_pre[l], d_act);
    grads.phi[l].w = matmul_tn(c.phi.inputs[l], d_pre);
    grads.phi[l].b = d_pre;
    d_act = matmul_nt(d_pre, params.phi[l].w);
  }

  // pooling: first D entries were column means, last D column maxima; the
  // max branch routes to the argmax row recorded in the cache
  const double inv_n = 1.0 / static_cast<double>(n);
  for (size_t col = 0; col < d; ++col) {
    const double g_avg = d_act(0, col) * inv_n;
    for (size_t i = 0; i < n; ++i) grads.d_x(i, col) += g_avg;
    grads.d_x(c.pool.max_rows[col], col) += d_act(0, d + col);
  }

  return grads;
}

}  // namespace softhg
