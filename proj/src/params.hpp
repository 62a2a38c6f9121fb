// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "activation.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace softhg {

// One affine layer; b is stored 1×n so Matrix is the only tensor carrier.
struct AffineLayer {
  Matrix w;
  Matrix b;
};

// The learnable tensors of one block. The offset network phi maps the 2D
// global-context vector to the M*D flattened prototype offsets; it has one
// affine layer by default and an optional hidden layer.
struct ParamTensors {
  Matrix p0;                      // M×D global prototypes
  std::vector<AffineLayer> phi;   // 2D -> [hidden ->] M*D
  Matrix w_pre;                   // D×D vertex pre-projection
  Matrix w_e;                     // D'×D hyperedge transform
  Matrix w_n;                     // D''×D' vertex transform

  // Visits every tensor as (name, Matrix&). The hidden phi layer, when
  // present, is named w_phi_hidden/b_phi_hidden; the output layer keeps the
  // canonical w_phi/b_phi names.
  template <class F>
  void for_each(F&& f) {
    f("p0", p0);
    if (phi.size() > 1) {
      f("w_phi_hidden", phi[0].w);
      f("b_phi_hidden", phi[0].b);
    }
    f("w_phi", phi.back().w);
    f("b_phi", phi.back().b);
    f("w_pre", w_pre);
    f("w_e", w_e);
    f("w_n", w_n);
  }

  template <class F>
  void for_each(F&& f) const {
    const_cast<ParamTensors*>(this)->for_each(
        [&](const char* name, Matrix& m) { f(name, static_cast<const Matrix&>(m)); });
  }
};

struct SoftHGParams : ParamTensors {
  size_t heads = 8;
  NormMode norm = NormMode::kENorm;
  Activation activation = Activation::kRelu;
  bool residual = true;

  size_t dim() const { return p0.cols(); }         // D
  size_t hyperedges() const { return p0.rows(); }  // M
  size_t edge_dim() const { return w_e.rows(); }   // D'
  size_t out_dim() const { return w_n.rows(); }    // D''
  size_t head_dim() const;                         // D / heads

  void validate() const;  // throws ConfigError / ShapeError
};

struct BlockConfig {
  size_t dim = 64;
  size_t hyperedges = 8;
  size_t heads = 8;
  size_t edge_dim = 0;    // 0 -> dim
  size_t out_dim = 0;     // 0 -> dim
  size_t phi_hidden = 0;  // 0 -> single affine offset network
  NormMode norm = NormMode::kENorm;
  Activation activation = Activation::kRelu;
  bool residual = true;
};

// Uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)] for every tensor; the
// prototype fan-in is D.
SoftHGParams init_params(const BlockConfig& cfg, Rng& rng);

ParamTensors zeros_like(const ParamTensors& p);

// Flat JSON object: each tensor name maps to {"shape":[r,c],"data":[...]}
// (row-major); hyperparameters are plain fields.
std::string params_to_json(const SoftHGParams& p);
SoftHGParams params_from_json(const std::string& text);
void save_params(const SoftHGParams& p, const std::string& path);
SoftHGParams load_params(const std::string& path);

}  // namespace softhg
