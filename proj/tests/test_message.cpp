// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "message.hpp"
#include "reference.hpp"
#include "rng.hpp"

using namespace softhg;

namespace {

Matrix random_matrix(size_t rows, size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

SoftHGParams make_params(size_t d, size_t m, size_t heads, uint64_t seed,
                         NormMode norm = NormMode::kENorm, bool residual = true) {
  BlockConfig cfg;
  cfg.dim = d;
  cfg.hyperedges = m;
  cfg.heads = heads;
  cfg.norm = norm;
  cfg.residual = residual;
  Rng rng(seed);
  return init_params(cfg, rng);
}

bool grads_all_zero(const BlockGrads& g) {
  bool zero = true;
  const_cast<BlockGrads&>(g).for_each([&](const char*, Matrix& m) {
    for (double v : m.values())
      if (v != 0.0) zero = false;
  });
  for (double v : g.d_x.values())
    if (v != 0.0) zero = false;
  return zero;
}

}  // namespace

TEST_CASE("aggregate: one-hot column selects one vertex") {
  const size_t n = 4, d = 3;
  Rng rng(1);
  Matrix x = random_matrix(n, d, rng);
  Matrix a(n, 1);
  a(2, 0) = 1.0;
  Matrix out = aggregate_v_to_e(a, x, Matrix::identity(d), Activation::kIdentity);
  for (size_t c = 0; c < d; ++c) CHECK(out(0, c) == doctest::Approx(x(2, c)).epsilon(1e-15));
}

TEST_CASE("aggregate: uniform column averages the vertices") {
  const size_t n = 5, d = 2;
  Rng rng(2);
  Matrix x = random_matrix(n, d, rng);
  Matrix a(n, 1);
  for (size_t i = 0; i < n; ++i) a(i, 0) = 1.0 / n;
  Matrix out = aggregate_v_to_e(a, x, Matrix::identity(d), Activation::kIdentity);
  auto means = col_means(x);
  for (size_t c = 0; c < d; ++c) CHECK(out(0, c) == doctest::Approx(means[c]).epsilon(1e-12));
}

TEST_CASE("aggregate matches the loop oracle") {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const size_t n = 1 + rng.below(8), d = 1 + rng.below(6), m = 1 + rng.below(6),
                 d_edge = 1 + rng.below(6);
    Matrix a = random_matrix(n, m, rng);
    Matrix x = random_matrix(n, d, rng);
    Matrix w_e = random_matrix(d_edge, d, rng);
    CHECK(max_abs_diff(aggregate_v_to_e(a, x, w_e, Activation::kRelu),
                       ref_aggregate_v_to_e(a, x, w_e, Activation::kRelu)) < 1e-12);
  }
}

TEST_CASE("disseminate: one-hot participation routes to one vertex") {
  const size_t n = 4, d_edge = 3;
  Rng rng(4);
  Matrix f = random_matrix(1, d_edge, rng);
  Matrix a(n, 1);
  a(1, 0) = 1.0;
  Matrix out = disseminate_e_to_v(a, f, Matrix::identity(d_edge), Activation::kIdentity);
  for (size_t c = 0; c < d_edge; ++c) {
    CHECK(out(1, c) == doctest::Approx(f(0, c)).epsilon(1e-15));
    CHECK(out(0, c) == 0.0);
    CHECK(out(3, c) == 0.0);
  }
}

TEST_CASE("disseminate: zero hyperedge features give sigma(0)") {
  Matrix a(3, 2);
  Matrix f(2, 4);
  Matrix w_n = Matrix::identity(4);
  Matrix relu_out = disseminate_e_to_v(a, f, w_n, Activation::kRelu);
  for (double v : relu_out.values()) CHECK(v == 0.0);
}

TEST_CASE("disseminate matches the loop oracle") {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const size_t n = 1 + rng.below(8), m = 1 + rng.below(6), d_edge = 1 + rng.below(6),
                 d_out = 1 + rng.below(6);
    Matrix a = random_matrix(n, m, rng);
    Matrix f = random_matrix(m, d_edge, rng);
    Matrix w_n = random_matrix(d_out, d_edge, rng);
    CHECK(max_abs_diff(disseminate_e_to_v(a, f, w_n, Activation::kGelu),
                       ref_disseminate_e_to_v(a, f, w_n, Activation::kGelu)) < 1e-12);
  }
}

TEST_CASE("forward equals the composition of its parts bit-for-bit") {
  const size_t n = 7, d = 4, m = 3;
  SoftHGParams p = make_params(d, m, 2, 6);
  Rng rng(7);
  Matrix x = random_matrix(n, d, rng);

  BlockOutput out = softhgnn_forward(x, p);

  PoolTrace pool = global_context(x);
  Matrix proto = dynamic_prototypes(p, pool.f_global);
  Matrix s = participation_scores(x, proto, p);
  Participation part = normalize(s, p.norm);
  Matrix f_e_act = aggregate_v_to_e(part.a, x, p.w_e, p.activation);
  Matrix x_prime = disseminate_e_to_v(part.a, f_e_act, p.w_n, p.activation);
  Matrix expect = p.residual ? add(x, x_prime) : x_prime;

  CHECK(max_abs_diff(out.x_out, expect) == 0.0);
}

TEST_CASE("forward with one vertex: full participation everywhere") {
  SoftHGParams p = make_params(4, 3, 1, 8);
  Rng rng(9);
  Matrix x = random_matrix(1, 4, rng);
  BlockOutput out = softhgnn_forward(x, p);
  CHECK(out.x_out.all_finite());
  for (double v : out.cache.part.a.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("forward matches the straight-line reimplementation") {
  SoftHGParams p = make_params(4, 3, 2, 10);
  Rng rng(11);
  Matrix x = random_matrix(6, 4, rng);
  CHECK(max_abs_diff(softhgnn_forward(x, p).x_out, ref_softhgnn_forward(x, p)) < 1e-10);
}

TEST_CASE("oracle suite: matrix form equals loop form on random instances") {
  OracleResult result = run_oracle_suite(12345, 100);
  CHECK(result.worst() < 1e-10);
}

TEST_CASE("forward is permutation equivariant in the vertices") {
  const size_t n = 8, d = 4;
  for (NormMode mode : {NormMode::kENorm, NormMode::kVNorm, NormMode::kNone}) {
    SoftHGParams p = make_params(d, 3, 2, 13, mode);
    Rng rng(14);
    Matrix x = random_matrix(n, d, rng);
    std::vector<size_t> perm = {3, 7, 1, 0, 6, 2, 5, 4};
    Matrix xp(n, d);
    for (size_t i = 0; i < n; ++i)
      for (size_t c = 0; c < d; ++c) xp(i, c) = x(perm[i], c);

    Matrix out = softhgnn_forward(x, p).x_out;
    Matrix outp = softhgnn_forward(xp, p).x_out;
    for (size_t i = 0; i < n; ++i)
      for (size_t c = 0; c < d; ++c)
        CHECK(outp(i, c) == doctest::Approx(out(perm[i], c)).epsilon(1e-11));
  }
}

TEST_CASE("backward: zero upstream gradient zeroes everything") {
  SoftHGParams p = make_params(4, 3, 2, 15);
  Rng rng(16);
  Matrix x = random_matrix(5, 4, rng);
  BlockOutput out = softhgnn_forward(x, p);
  BlockGrads g = softhgnn_backward(out, p, Matrix(5, 4));
  CHECK(grads_all_zero(g));
}

TEST_CASE("backward is linear in the upstream gradient") {
  SoftHGParams p = make_params(4, 3, 2, 17);
  Rng rng(18);
  Matrix x = random_matrix(5, 4, rng);
  BlockOutput out = softhgnn_forward(x, p);
  Matrix d_out = random_matrix(5, 4, rng);
  BlockGrads g1 = softhgnn_backward(out, p, d_out);
  BlockGrads g2 = softhgnn_backward(out, p, scaled(d_out, 2.0));

  g1.for_each([&](const char* name, Matrix& m1) {
    Matrix* m2 = nullptr;
    g2.for_each([&](const char* n2, Matrix& m) {
      if (std::string(n2) == name) m2 = &m;
    });
    CHECK(max_abs_diff(scaled(m1, 2.0), *m2) < 1e-12);
  });
  CHECK(max_abs_diff(scaled(g1.d_x, 2.0), g2.d_x) < 1e-12);
}

TEST_CASE("backward rejects a non-finite upstream gradient") {
  SoftHGParams p = make_params(4, 2, 1, 19);
  Rng rng(20);
  Matrix x = random_matrix(3, 4, rng);
  BlockOutput out = softhgnn_forward(x, p);
  Matrix bad(3, 4);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(softhgnn_backward(out, p, bad), NumericError);
}

TEST_CASE("forward validates input shape") {
  SoftHGParams p = make_params(4, 2, 1, 21);
  CHECK_THROWS_AS(softhgnn_forward(Matrix(3, 5), p), ShapeError);
  CHECK_THROWS_AS(softhgnn_forward(Matrix(0, 4), p), ShapeError);
}

TEST_CASE("ses forward keeps the fixed columns and exactly k dynamic ones") {
  const size_t n = 6, d = 4;
  SeSConfig cfg{2, 4, 2, 8};
  BlockConfig bc;
  bc.dim = d;
  bc.hyperedges = cfg.total();
  bc.heads = 2;
  Rng rng(22);
  SoftHGParams p = init_params(bc, rng);
  Matrix x = random_matrix(n, d, rng);

  BlockOutput out = softhgnn_forward_ses(x, p, cfg);
  REQUIRE(out.cache.ses.has_value());
  CHECK(out.cache.part.a.cols() == cfg.m_fixed + cfg.k);
  CHECK(out.cache.ses->selected.size() == cfg.k);
  // active raw scores: fixed columns first, then the selected dynamic ones
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < cfg.m_fixed; ++j)
      CHECK(out.cache.part.s_raw(i, j) == out.cache.s_full(i, j));
    for (size_t j = 0; j < cfg.k; ++j)
      CHECK(out.cache.part.s_raw(i, cfg.m_fixed + j) ==
            out.cache.s_full(i, cfg.m_fixed + out.cache.ses->selected[j]));
  }
  for (double sum : col_sums(out.cache.part.a))
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ses forward with full selection matches plain E-Norm forward") {
  const size_t n = 5, d = 4;
  SeSConfig cfg{0, 3, 3, 4};
  BlockConfig bc;
  bc.dim = d;
  bc.hyperedges = 3;
  bc.heads = 1;
  Rng rng(23);
  SoftHGParams p = init_params(bc, rng);
  p.norm = NormMode::kENorm;
  Matrix x = random_matrix(n, d, rng);
  Matrix plain = softhgnn_forward(x, p).x_out;
  Matrix sparse = softhgnn_forward_ses(x, p, cfg).x_out;
  CHECK(max_abs_diff(plain, sparse) < 1e-14);
}

TEST_CASE("ses backward scatters score gradients onto the selected columns only") {
  // holding the selection fixed, the sparse forward is differentiable; the
  // prototype gradient crosses the scatter, the softmax and the score map,
  // so central differences check the whole sparse chain
  const size_t n = 6, d = 4;
  SeSConfig cfg{2, 4, 2, 8};
  BlockConfig bc;
  bc.dim = d;
  bc.hyperedges = cfg.total();
  bc.heads = 2;
  Rng rng(91);
  SoftHGParams p = init_params(bc, rng);
  Matrix x = random_matrix(n, d, rng);

  BlockOutput out = softhgnn_forward_ses(x, p, cfg);
  const std::vector<size_t> base_sel = out.cache.ses->selected;
  BlockGrads grads = softhgnn_backward(out, p, scaled(out.x_out, 2.0));

  const double step = 1e-5;
  for (size_t idx = 0; idx < p.p0.size(); ++idx) {
    double fd[2];
    for (int side = 0; side < 2; ++side) {
      SoftHGParams probe = p;
      probe.p0.data()[idx] += side == 0 ? step : -step;
      BlockOutput po = softhgnn_forward_ses(x, probe, cfg);
      REQUIRE(po.cache.ses->selected == base_sel);  // selection must not flip
      double acc = 0.0;
      for (double v : po.x_out.values()) acc += v * v;
      fd[side] = acc;
    }
    const double numeric = (fd[0] - fd[1]) / (2.0 * step);
    const double analytic = grads.p0.data()[idx];
    const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
    CHECK(std::abs(numeric - analytic) / denom < 1e-4);
  }
}

TEST_CASE("ses forward rejects a mismatched split") {
  SoftHGParams p = make_params(4, 6, 1, 24);
  Rng rng(25);
  Matrix x = random_matrix(4, 4, rng);
  SeSConfig cfg{2, 8, 4, 8};  // 2+8 != 6
  CHECK_THROWS_AS(softhgnn_forward_ses(x, p, cfg), ConfigError);
}
