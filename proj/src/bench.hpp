// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace softhg {

struct BenchRow {
  std::string op;
  size_t n = 0;
  size_t d = 0;
  size_t m = 0;
  size_t repeats = 0;
  double median_seconds = 0.0;
  size_t workspace_bytes = 0;  // analytic: bytes of every matrix the op builds
};

struct BenchOptions {
  std::vector<std::string> ops = {"softhgnn", "attention", "hgnn_knn"};
  std::vector<size_t> n_list = {256, 512, 1024, 2048, 4096, 8192};
  size_t d = 64;
  size_t m = 8;
  size_t repeats = 5;
  uint64_t seed = 1;
};

// Median wall time over `repeats` runs after one warm-up, per (op, N), on
// seeded deterministic inputs. Strictly sequential, monotonic clock.
// Unknown op names raise a usage error listing the valid ones.
std::vector<BenchRow> scaling_run(const BenchOptions& opts);

// least-squares slope of log(seconds) against log(n)
double loglog_slope(std::span<const size_t> ns, std::span<const double> seconds);

// slope of one op extracted from a result set
double op_slope(const std::vector<BenchRow>& rows, const std::string& op);

// Expected scaling exponents: near-linear for the soft block, near-quadratic
// for self-attention and for classical construction + convolution. The bands
// absorb allocator and cache noise at desk scale.
struct SlopeBand {
  double lo;
  double hi;
};
SlopeBand expected_slope_band(const std::string& op);

// throws NumericError naming op, slope and band on the first violation
void check_slopes(const std::vector<BenchRow>& rows);

// op,n,d,m,repeats,median_seconds,workspace_bytes
std::string bench_csv(const std::vector<BenchRow>& rows);
void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows);
std::string bench_table(const std::vector<BenchRow>& rows);

}  // namespace softhg
