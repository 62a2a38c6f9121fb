// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "activation.hpp"
#include "matrix.hpp"

namespace softhg {

// Binary vertex-by-hyperedge incidence of a classical hypergraph. Stored as
// bytes: at benchmark scale a dense double matrix would be wasteful.
class Incidence {
 public:
  Incidence(size_t vertices, size_t hyperedges)
      : rows_(vertices), cols_(hyperedges), h_(vertices * hyperedges, 0) {}

  size_t vertices() const { return rows_; }
  size_t hyperedges() const { return cols_; }
  bool at(size_t v, size_t e) const { return h_[v * cols_ + e] != 0; }
  void set(size_t v, size_t e) { h_[v * cols_ + e] = 1; }

  size_t vertex_degree(size_t v) const;
  size_t hyperedge_degree(size_t e) const;
  Matrix to_matrix() const;

 private:
  size_t rows_, cols_;
  std::vector<uint8_t> h_;
};

// One hyperedge per vertex: the vertex itself plus its k nearest neighbors by
// Euclidean distance, ties toward the lower vertex index.
Incidence knn_hypergraph(const Matrix& x, size_t k);

// One hyperedge per vertex: the vertex plus every vertex within distance eps.
Incidence eps_hypergraph(const Matrix& x, double eps);

// Classical hypergraph convolution with identity hyperedge weights:
// X' = act(Dv^-1 H De^-1 H^T X theta).
Matrix hgnn_conv(const Matrix& x, const Incidence& inc, const Matrix& theta,
                 Activation act);

struct AttnParams {
  Matrix w_q, w_k, w_v;  // D×D each
};

// Single-head scaled dot-product attention:
// softmax_rows((X Wq)(X Wk)^T / sqrt(D)) (X Wv).
Matrix self_attention(const Matrix& x, const AttnParams& params);

}  // namespace softhg
