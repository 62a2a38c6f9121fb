// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "baselines.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace softhg {

size_t Incidence::vertex_degree(size_t v) const {
  size_t deg = 0;
  for (size_t e = 0; e < cols_; ++e) deg += h_[v * cols_ + e];
  return deg;
}

size_t Incidence::hyperedge_degree(size_t e) const {
  size_t deg = 0;
  for (size_t v = 0; v < rows_; ++v) deg += h_[v * cols_ + e];
  return deg;
}

Matrix Incidence::to_matrix() const {
  Matrix m(rows_, cols_);
  for (size_t i = 0; i < h_.size(); ++i) m.data()[i] = h_[i];
  return m;
}

namespace {

double squared_distance(const Matrix& x, size_t i, size_t j) {
  const double* a = x.data() + i * x.cols();
  const double* b = x.data() + j * x.cols();
  double acc = 0.0;
  for (size_t c = 0; c < x.cols(); ++c) {
    const double diff = a[c] - b[c];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace

Incidence knn_hypergraph(const Matrix& x, size_t k) {
  const size_t n = x.rows();
  if (k >= n) {
    throw ConfigError("k-NN construction needs k < N, got k=" + std::to_string(k) +
                      " with N=" + std::to_string(n));
  }
  Incidence inc(n, n);
  std::vector<std::pair<double, size_t>> dist;
  dist.reserve(n - 1);
  for (size_t i = 0; i < n; ++i) {
    inc.set(i, i);
    dist.clear();
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      dist.emplace_back(squared_distance(x, i, j), j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
    for (size_t r = 0; r < k; ++r) inc.set(dist[r].second, i);
  }
  return inc;
}

Incidence eps_hypergraph(const Matrix& x, double eps) {
  if (eps < 0.0) throw ConfigError("epsilon-ball radius must be >= 0");
  const size_t n = x.rows();
  const double eps_sq = eps * eps;
  Incidence inc(n, n);
  for (size_t i = 0; i < n; ++i) {
    inc.set(i, i);
    for (size_t j = 0; j < n; ++j) {
      if (j != i && squared_distance(x, i, j) <= eps_sq) inc.set(j, i);
    }
  }
  return inc;
}

Matrix hgnn_conv(const Matrix& x, const Incidence& inc, const Matrix& theta,
                 Activation act) {
  const size_t n = inc.vertices();
  const size_t m = inc.hyperedges();
  if (x.rows() != n) {
    throw ShapeError("hgnn_conv: features are " + x.shape_str() + ", incidence has " +
                     std::to_string(n) + " vertices");
  }
  if (theta.rows() != x.cols()) {
    throw ShapeError("hgnn_conv: theta is " + theta.shape_str() + ", features have " +
                     std::to_string(x.cols()) + " columns");
  }
  std::vector<double> inv_deg_e(m), inv_deg_v(n);
  for (size_t e = 0; e < m; ++e) {
    const size_t deg = inc.hyperedge_degree(e);
    if (deg == 0) {
      throw NumericError("hgnn_conv: hyperedge " + std::to_string(e) + " has zero degree");
    }
    inv_deg_e[e] = 1.0 / static_cast<double>(deg);
  }
  for (size_t v = 0; v < n; ++v) {
    const size_t deg = inc.vertex_degree(v);
    if (deg == 0) {
      throw NumericError("hgnn_conv: vertex " + std::to_string(v) + " has zero degree");
    }
    inv_deg_v[v] = 1.0 / static_cast<double>(deg);
  }

  const size_t d = x.cols();
  // De^-1 H^T X
  Matrix edge_feats(m, d);
  for (size_t v = 0; v < n; ++v)
    for (size_t e = 0; e < m; ++e) {
      if (!inc.at(v, e)) continue;
      for (size_t c = 0; c < d; ++c) edge_feats(e, c) += x(v, c);
    }
  for (size_t e = 0; e < m; ++e)
    for (size_t c = 0; c < d; ++c) edge_feats(e, c) *= inv_deg_e[e];
  // Dv^-1 H (...)
  Matrix vertex_feats(n, d);
  for (size_t v = 0; v < n; ++v) {
    for (size_t e = 0; e < m; ++e) {
      if (!inc.at(v, e)) continue;
      for (size_t c = 0; c < d; ++c) vertex_feats(v, c) += edge_feats(e, c);
    }
    for (size_t c = 0; c < d; ++c) vertex_feats(v, c) *= inv_deg_v[v];
  }
  return activate(act, matmul(vertex_feats, theta));
}

Matrix self_attention(const Matrix& x, const AttnParams& params) {
  if (params.w_q.rows() != x.cols()) {
    throw ShapeError("self_attention: query weights are " + params.w_q.shape_str() +
                     ", tokens are " + x.shape_str());
  }
  Matrix q = matmul(x, params.w_q);
  Matrix k = matmul(x, params.w_k);
  Matrix v = matmul(x, params.w_v);
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.cols()));
  Matrix attn = softmax_rows(scaled(matmul_nt(q, k), scale));
  return matmul(attn, v);
}

}  // namespace softhg
