// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numeric>

#include "errors.hpp"
#include "rng.hpp"
#include "ses.hpp"

using namespace softhg;

namespace {

Matrix random_matrix(size_t rows, size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("activation scores are column sums") {
  Matrix s{{1, 2}, {3, 4}};
  auto g = activation_scores(s);
  REQUIRE(g.size() == 2);
  CHECK(g[0] == 4.0);
  CHECK(g[1] == 6.0);

  auto zero = activation_scores(Matrix(3, 2));
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);

  Matrix one_row{{7, -2, 0.5}};
  auto single = activation_scores(one_row);
  CHECK(single[0] == 7.0);
  CHECK(single[1] == -2.0);
  CHECK(single[2] == 0.5);
}

TEST_CASE("select_topk basics and tie-break") {
  const double g1[] = {4.0, 6.0};
  auto sel = select_topk(std::span<const double>(g1, 2), 1);
  REQUIRE(sel.size() == 1);
  CHECK(sel[0] == 1);

  const double ties[] = {5.0, 5.0, 5.0};
  auto sel2 = select_topk(std::span<const double>(ties, 3), 2);
  CHECK(sel2 == std::vector<size_t>{0, 1});

  const double g3[] = {1.0, 9.0, 3.0};
  auto all = select_topk(std::span<const double>(g3, 3), 3);
  CHECK(all == std::vector<size_t>{0, 1, 2});

  CHECK_THROWS_AS(select_topk(std::span<const double>(g3, 3), 4), ConfigError);
}

TEST_CASE("select_topk ignores a constant shift") {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> g(8);
    for (double& v : g) v = rng.normal();
    std::vector<double> shifted = g;
    for (double& v : shifted) v += 123.5;
    CHECK(select_topk(g, 3) == select_topk(shifted, 3));
  }
}

TEST_CASE("build_participation_ses splices raw columns and column-normalizes") {
  Rng rng(2);
  Matrix s_fixed = random_matrix(5, 2, rng);
  Matrix s_dyn = random_matrix(5, 4, rng);
  std::vector<size_t> sel = {1, 3};
  Participation part = build_participation_ses(s_fixed, s_dyn, sel);

  REQUIRE(part.a.cols() == 4);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(part.s_raw(i, 0) == s_fixed(i, 0));
    CHECK(part.s_raw(i, 1) == s_fixed(i, 1));
    CHECK(part.s_raw(i, 2) == s_dyn(i, 1));
    CHECK(part.s_raw(i, 3) == s_dyn(i, 3));
  }
  for (double sum : col_sums(part.a)) CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

  // the column softmax treats columns independently, so the participation of
  // a selected column equals the same column of the softmax over all of S
  Matrix s_all(5, 6);
  for (size_t i = 0; i < 5; ++i) {
    for (size_t j = 0; j < 2; ++j) s_all(i, j) = s_fixed(i, j);
    for (size_t j = 0; j < 4; ++j) s_all(i, 2 + j) = s_dyn(i, j);
  }
  Matrix full = softmax_cols(s_all);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(part.a(i, 2) == doctest::Approx(full(i, 2 + 1)).epsilon(1e-12));
    CHECK(part.a(i, 3) == doctest::Approx(full(i, 2 + 3)).epsilon(1e-12));
  }
}

TEST_CASE("build_participation_ses with no fixed part and full selection") {
  Rng rng(3);
  Matrix s_dyn = random_matrix(4, 3, rng);
  std::vector<size_t> all = {0, 1, 2};
  Participation part = build_participation_ses(Matrix(4, 0), s_dyn, all);
  Participation plain = normalize(s_dyn, NormMode::kENorm);
  CHECK(max_abs_diff(part.a, plain.a) < 1e-14);
}

TEST_CASE("brute-force top-k agreement on random scores") {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const size_t n = 1 + rng.below(6), m_dyn = 2 + rng.below(8);
    const size_t k = 1 + rng.below(m_dyn);
    Matrix s_dyn = random_matrix(n, m_dyn, rng);
    auto g = activation_scores(s_dyn);
    auto sel = select_topk(g, k);

    // brute force: every selected index beats (or ties from below) the rest
    std::vector<char> chosen(m_dyn, 0);
    for (size_t idx : sel) chosen[idx] = 1;
    for (size_t in = 0; in < m_dyn; ++in) {
      if (!chosen[in]) continue;
      for (size_t outj = 0; outj < m_dyn; ++outj) {
        if (chosen[outj]) continue;
        const bool wins = g[in] > g[outj] || (g[in] == g[outj] && in < outj);
        CHECK(wins);
      }
    }
  }
}

TEST_CASE("record_and_balance target probability") {
  SeSConfig cfg{16, 32, 16, 8};
  const double target = static_cast<double>(cfg.k) / static_cast<double>(cfg.m_dyn);
  CHECK(target == 0.5);
}

TEST_CASE("uniform rotation over a full window balances the load") {
  SeSConfig cfg{0, 4, 1, 4};
  SeSState state(cfg);
  double loss = -1.0;
  for (size_t t = 0; t < 4; ++t) {
    const size_t sel[] = {t % 4};
    loss = state.record_and_balance(std::span<const size_t>(sel, 1));
  }
  CHECK(loss == doctest::Approx(0.0).epsilon(1e-15));
  for (double p : state.activation_probabilities())
    CHECK(p == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("degenerate selection reproduces the hand-computed loss") {
  SeSConfig cfg{0, 4, 1, 8};
  SeSState state(cfg);
  double loss = -1.0;
  const size_t sel[] = {0};
  for (size_t t = 0; t < 8; ++t)
    loss = state.record_and_balance(std::span<const size_t>(sel, 1));
  // p = (1,0,0,0), target 1/4: (0.75^2 + 3*0.25^2)/4
  CHECK(loss == doctest::Approx(0.1875).epsilon(1e-15));
}

TEST_CASE("probabilities use the passes seen until the window fills") {
  SeSConfig cfg{0, 2, 1, 10};
  SeSState state(cfg);
  const size_t sel0[] = {0};
  const size_t sel1[] = {1};
  state.record_and_balance(std::span<const size_t>(sel0, 1));
  auto p = state.activation_probabilities();
  CHECK(p[0] == 1.0);
  CHECK(p[1] == 0.0);
  state.record_and_balance(std::span<const size_t>(sel1, 1));
  p = state.activation_probabilities();
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);
}

TEST_CASE("window eviction keeps only the last T passes") {
  SeSConfig cfg{0, 2, 1, 2};
  SeSState state(cfg);
  const size_t sel0[] = {0};
  const size_t sel1[] = {1};
  state.record_and_balance(std::span<const size_t>(sel0, 1));
  state.record_and_balance(std::span<const size_t>(sel1, 1));
  state.record_and_balance(std::span<const size_t>(sel1, 1));
  auto p = state.activation_probabilities();
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 1.0);
}

TEST_CASE("with a full window the probabilities sum to k") {
  Rng rng(5);
  SeSConfig cfg{0, 6, 2, 5};
  SeSState state(cfg);
  for (size_t t = 0; t < 13; ++t) {
    std::vector<double> g(cfg.m_dyn);
    for (double& v : g) v = rng.normal();
    state.record_and_balance(select_topk(g, cfg.k));
    if (t + 1 >= cfg.window) {
      const auto p = state.activation_probabilities();
      const double total = std::accumulate(p.begin(), p.end(), 0.0);
      CHECK(total == doctest::Approx(static_cast<double>(cfg.k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("the load-balance loss is non-negative and zero only at the target") {
  Rng rng(6);
  SeSConfig cfg{0, 4, 2, 4};
  SeSState state(cfg);
  for (size_t t = 0; t < 20; ++t) {
    std::vector<double> g(cfg.m_dyn);
    for (double& v : g) v = rng.normal();
    const double loss = state.record_and_balance(select_topk(g, cfg.k));
    CHECK(loss >= 0.0);
    bool at_target = true;
    for (double p : state.activation_probabilities())
      if (p != 0.5) at_target = false;
    if (loss == 0.0) CHECK(at_target);
    if (at_target) CHECK(loss == 0.0);
  }
}

TEST_CASE("state dump carries p, passes and window") {
  SeSConfig cfg{0, 3, 1, 4};
  SeSState state(cfg);
  const size_t sel[] = {2};
  state.record_and_balance(std::span<const size_t>(sel, 1));
  const std::string dump = state.dump_json();
  CHECK(dump.find("\"p\"") != std::string::npos);
  CHECK(dump.find("\"passes_seen\":1") != std::string::npos);
  CHECK(dump.find("\"window\":4") != std::string::npos);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS((SeSConfig{4, 4, 0, 8}.validate()), ConfigError);
  CHECK_THROWS_AS((SeSConfig{4, 4, 5, 8}.validate()), ConfigError);
  CHECK_THROWS_AS((SeSConfig{4, 4, 2, 0}.validate()), ConfigError);
  CHECK_NOTHROW((SeSConfig{0, 4, 4, 1}.validate()));
}

TEST_CASE("reset clears the window") {
  SeSConfig cfg{0, 2, 1, 4};
  SeSState state(cfg);
  const size_t sel[] = {0};
  state.record_and_balance(std::span<const size_t>(sel, 1));
  state.reset();
  CHECK(state.passes_seen() == 0);
  for (double p : state.activation_probabilities()) CHECK(p == 0.0);
}
