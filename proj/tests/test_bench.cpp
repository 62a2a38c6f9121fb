// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "bench.hpp"
#include "errors.hpp"

using namespace softhg;

namespace {

BenchOptions tiny_options() {
  BenchOptions opts;
  opts.ops = {"softhgnn"};
  opts.n_list = {32, 64, 128};
  opts.d = 16;
  opts.m = 4;
  opts.repeats = 5;
  return opts;
}

}  // namespace

TEST_CASE("scaling_run produces positive medians and echoes the setup") {
  std::vector<BenchRow> rows = scaling_run(tiny_options());
  REQUIRE(rows.size() == 3);
  for (const BenchRow& r : rows) {
    CHECK(r.op == "softhgnn");
    CHECK(r.median_seconds > 0.0);
    CHECK(r.repeats == 5);
    CHECK(r.d == 16);
    CHECK(r.m == 4);
    CHECK(r.workspace_bytes > 0);
  }
  CHECK(rows[0].n == 32);
  CHECK(rows[2].n == 128);
}

TEST_CASE("unknown ops and bad sweeps are usage errors") {
  BenchOptions opts = tiny_options();
  opts.ops = {"softhgnn", "qr_solver"};
  CHECK_THROWS_WITH_AS(scaling_run(opts), doctest::Contains("qr_solver"), ConfigError);
  CHECK_THROWS_WITH_AS(scaling_run(opts), doctest::Contains("valid ops"), ConfigError);

  opts = tiny_options();
  opts.n_list = {128, 64};
  CHECK_THROWS_AS(scaling_run(opts), ConfigError);

  opts = tiny_options();
  opts.repeats = 3;
  CHECK_THROWS_AS(scaling_run(opts), ConfigError);
}

TEST_CASE("workspace accounting is linear in N for the soft block") {
  std::vector<BenchRow> rows = scaling_run(tiny_options());
  // bytes(N) = a*N + b from the first two points, then the third is exact
  const double n0 = static_cast<double>(rows[0].n), n1 = static_cast<double>(rows[1].n);
  const double b0 = static_cast<double>(rows[0].workspace_bytes);
  const double b1 = static_cast<double>(rows[1].workspace_bytes);
  const double a = (b1 - b0) / (n1 - n0);
  const double b = b0 - a * n0;
  const double predicted = a * static_cast<double>(rows[2].n) + b;
  CHECK(predicted == static_cast<double>(rows[2].workspace_bytes));
}

TEST_CASE("workspace accounting is deterministic") {
  std::vector<BenchRow> a = scaling_run(tiny_options());
  std::vector<BenchRow> b = scaling_run(tiny_options());
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].workspace_bytes == b[i].workspace_bytes);
}

TEST_CASE("attention workspace grows quadratically, the block linearly") {
  BenchOptions opts = tiny_options();
  opts.ops = {"softhgnn", "attention"};
  opts.n_list = {32, 64};
  std::vector<BenchRow> rows = scaling_run(opts);
  // doubling N: the attention workspace grows by ~4x (N^2 terms dominate),
  // the block's by less than 2.5x
  const double block_ratio =
      static_cast<double>(rows[1].workspace_bytes) / rows[0].workspace_bytes;
  const double attn_ratio =
      static_cast<double>(rows[3].workspace_bytes) / rows[2].workspace_bytes;
  CHECK(block_ratio < 2.5);
  CHECK(attn_ratio > 3.0);
}

TEST_CASE("loglog slope recovers exact power laws") {
  const size_t ns[] = {256, 512, 1024, 2048};
  double quadratic[4], linear[4];
  for (int i = 0; i < 4; ++i) {
    const double n = static_cast<double>(ns[i]);
    quadratic[i] = 3e-9 * n * n;
    linear[i] = 2e-7 * n;
  }
  CHECK(loglog_slope(ns, quadratic) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(loglog_slope(ns, linear) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("slope bands separate linear from quadratic") {
  CHECK(expected_slope_band("softhgnn").hi < expected_slope_band("attention").lo);
  CHECK_THROWS_AS(expected_slope_band("nope"), ConfigError);
}

TEST_CASE("check_slopes flags a quadratic sweep labeled softhgnn") {
  std::vector<BenchRow> fake;
  for (size_t n : {256, 512, 1024, 2048}) {
    const double t = 1e-9 * static_cast<double>(n) * static_cast<double>(n);
    fake.push_back(BenchRow{"softhgnn", n, 64, 8, 5, t, 0});
  }
  CHECK_THROWS_WITH_AS(check_slopes(fake), doctest::Contains("softhgnn"), NumericError);
}

TEST_CASE("csv format matches the documented header") {
  std::vector<BenchRow> rows = {{"softhgnn", 256, 64, 8, 5, 0.001234, 4096}};
  const std::string csv = bench_csv(rows);
  CHECK(csv.rfind("op,n,d,m,repeats,median_seconds,workspace_bytes\n", 0) == 0);
  CHECK(csv.find("softhgnn,256,64,8,5,") != std::string::npos);
  CHECK(csv.find(",4096\n") != std::string::npos);
}

TEST_CASE("hgnn_knn rows run at small scale") {
  BenchOptions opts = tiny_options();
  opts.ops = {"hgnn_knn"};
  opts.n_list = {32, 64};
  std::vector<BenchRow> rows = scaling_run(opts);
  REQUIRE(rows.size() == 2);
  for (const BenchRow& r : rows) CHECK(r.median_seconds > 0.0);
}
