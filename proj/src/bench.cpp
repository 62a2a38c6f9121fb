// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "baselines.hpp"
#include "errors.hpp"
#include "message.hpp"
#include "rng.hpp"

namespace softhg {

namespace {

// keeps the optimizer from dropping the benched computation
volatile double g_sink = 0.0;

Matrix random_matrix(size_t rows, size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

std::function<void()> make_softhgnn(size_t n, size_t d, size_t m, Rng& rng) {
  BlockConfig cfg;
  cfg.dim = d;
  cfg.hyperedges = m;
  cfg.heads = (d % 8 == 0) ? 8 : 1;
  SoftHGParams params = init_params(cfg, rng);
  Matrix x = random_matrix(n, d, rng);
  return [params = std::move(params), x = std::move(x)] {
    g_sink = softhgnn_forward(x, params).x_out(0, 0);
  };
}

std::function<void()> make_attention(size_t n, size_t d, size_t /*m*/, Rng& rng) {
  AttnParams params{random_matrix(d, d, rng), random_matrix(d, d, rng),
                    random_matrix(d, d, rng)};
  Matrix x = random_matrix(n, d, rng);
  return [params = std::move(params), x = std::move(x)] {
    g_sink = self_attention(x, params)(0, 0);
  };
}

std::function<void()> make_hgnn_knn(size_t n, size_t d, size_t /*m*/, Rng& rng) {
  Matrix x = random_matrix(n, d, rng);
  Matrix theta = random_matrix(d, d, rng);
  const size_t k = std::min<size_t>(8, n - 1);
  return [x = std::move(x), theta = std::move(theta), k] {
    Incidence inc = knn_hypergraph(x, k);
    g_sink = hgnn_conv(x, inc, theta, Activation::kRelu)(0, 0);
  };
}

}  // namespace

std::vector<BenchRow> scaling_run(const BenchOptions& opts) {
  if (opts.repeats < 5) throw ConfigError("benchmark needs repeats >= 5");
  if (opts.n_list.empty() || !std::is_sorted(opts.n_list.begin(), opts.n_list.end())) {
    throw ConfigError("benchmark N list must be non-empty and ascending");
  }
  for (const std::string& op : opts.ops) {
    if (op != "softhgnn" && op != "attention" && op != "hgnn_knn") {
      throw ConfigError("unknown op '" + op +
                        "': valid ops are softhgnn, attention, hgnn_knn");
    }
  }

  std::vector<BenchRow> rows;
  for (const std::string& op : opts.ops) {
    for (size_t n : opts.n_list) {
      Rng rng(opts.seed ^ (n * 0x9e3779b97f4a7c15ull));
      std::function<void()> run;
      if (op == "softhgnn") run = make_softhgnn(n, opts.d, opts.m, rng);
      else if (op == "attention") run = make_attention(n, opts.d, opts.m, rng);
      else run = make_hgnn_knn(n, opts.d, opts.m, rng);

      // warm-up doubles as the workspace-accounting pass
      workspace_counter_reset();
      run();
      const size_t workspace = workspace_counter_bytes();

      std::vector<double> times(opts.repeats);
      for (double& t : times) {
        const auto begin = std::chrono::steady_clock::now();
        run();
        const auto end = std::chrono::steady_clock::now();
        t = std::chrono::duration<double>(end - begin).count();
      }
      std::sort(times.begin(), times.end());
      const double median = (opts.repeats % 2 == 1)
                                ? times[opts.repeats / 2]
                                : 0.5 * (times[opts.repeats / 2 - 1] + times[opts.repeats / 2]);

      rows.push_back(BenchRow{op, n, opts.d, opts.m, opts.repeats, median, workspace});
    }
  }
  return rows;
}

double loglog_slope(std::span<const size_t> ns, std::span<const double> seconds) {
  if (ns.size() != seconds.size() || ns.size() < 2) {
    throw ConfigError("slope needs at least two (n, time) points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double count = static_cast<double>(ns.size());
  for (size_t i = 0; i < ns.size(); ++i) {
    const double lx = std::log(static_cast<double>(ns[i]));
    const double ly = std::log(seconds[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double op_slope(const std::vector<BenchRow>& rows, const std::string& op) {
  std::vector<size_t> ns;
  std::vector<double> secs;
  for (const BenchRow& r : rows) {
    if (r.op == op) {
      ns.push_back(r.n);
      secs.push_back(r.median_seconds);
    }
  }
  if (ns.size() < 2) {
    throw ConfigError("no sweep for op '" + op + "' in the benchmark results");
  }
  return loglog_slope(ns, secs);
}

SlopeBand expected_slope_band(const std::string& op) {
  if (op == "softhgnn") return {0.8, 1.3};
  if (op == "attention") return {1.6, 2.3};
  if (op == "hgnn_knn") return {1.6, 2.5};
  throw ConfigError("unknown op '" + op + "': valid ops are softhgnn, attention, hgnn_knn");
}

void check_slopes(const std::vector<BenchRow>& rows) {
  std::vector<std::string> seen;
  for (const BenchRow& r : rows) {
    if (std::find(seen.begin(), seen.end(), r.op) == seen.end()) seen.push_back(r.op);
  }
  for (const std::string& op : seen) {
    const double slope = op_slope(rows, op);
    const SlopeBand band = expected_slope_band(op);
    if (slope < band.lo || slope > band.hi) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "slope out of band: op=%s slope=%.3f band=[%.2f, %.2f]",
                    op.c_str(), slope, band.lo, band.hi);
      throw NumericError(buf);
    }
  }
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << "op,n,d,m,repeats,median_seconds,workspace_bytes\n";
  char buf[192];
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%zu,%zu,%zu,%zu,%.6e,%zu\n", r.op.c_str(), r.n,
                  r.d, r.m, r.repeats, r.median_seconds, r.workspace_bytes);
    os << buf;
  }
  return os.str();
}

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << bench_csv(rows);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string bench_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%-10s %8s %6s %4s %14s %16s\n", "op", "n", "d", "m",
                "median_sec", "workspace_bytes");
  os << buf;
  for (const BenchRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-10s %8zu %6zu %4zu %14.6e %16zu\n", r.op.c_str(),
                  r.n, r.d, r.m, r.median_seconds, r.workspace_bytes);
    os << buf;
  }
  return os.str();
}

}  // namespace softhg
