// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "rng.hpp"

namespace softhg {

Matrix ref_matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("ref_matmul: dimension mismatch: lhs is " + a.shape_str() +
                     ", rhs is " + b.shape_str());
  }
  Matrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  return out;
}

Matrix ref_aggregate_v_to_e(const Matrix& a, const Matrix& x, const Matrix& w_e,
                            Activation act) {
  const size_t n = x.rows(), d = x.cols(), m = a.cols();
  Matrix f_e(m, d);
  for (size_t e = 0; e < m; ++e)
    for (size_t c = 0; c < d; ++c) {
      double acc = 0.0;
      for (size_t i = 0; i < n; ++i) acc += a(i, e) * x(i, c);
      f_e(e, c) = acc;
    }
  Matrix out(m, w_e.rows());
  for (size_t e = 0; e < m; ++e)
    for (size_t o = 0; o < w_e.rows(); ++o) {
      double acc = 0.0;
      for (size_t c = 0; c < d; ++c) acc += w_e(o, c) * f_e(e, c);
      out(e, o) = activate(act, acc);
    }
  return out;
}

Matrix ref_disseminate_e_to_v(const Matrix& a, const Matrix& f_e_act, const Matrix& w_n,
                              Activation act) {
  const size_t n = a.rows(), m = a.cols(), d_edge = f_e_act.cols();
  Matrix x_tilde(n, d_edge);
  for (size_t i = 0; i < n; ++i)
    for (size_t c = 0; c < d_edge; ++c) {
      double acc = 0.0;
      for (size_t e = 0; e < m; ++e) acc += a(i, e) * f_e_act(e, c);
      x_tilde(i, c) = acc;
    }
  Matrix out(n, w_n.rows());
  for (size_t i = 0; i < n; ++i)
    for (size_t o = 0; o < w_n.rows(); ++o) {
      double acc = 0.0;
      for (size_t c = 0; c < d_edge; ++c) acc += w_n(o, c) * x_tilde(i, c);
      out(i, o) = activate(act, acc);
    }
  return out;
}

Matrix ref_softhgnn_forward(const Matrix& x, const SoftHGParams& params) {
  const size_t n = x.rows(), d = x.cols(), m = params.hyperedges();
  const size_t h = params.heads, d_head = d / h;

  // pooling
  std::vector<double> f_global(2 * d, 0.0);
  for (size_t c = 0; c < d; ++c) {
    double sum = 0.0, best = x(0, c);
    for (size_t i = 0; i < n; ++i) {
      sum += x(i, c);
      if (x(i, c) > best) best = x(i, c);
    }
    f_global[c] = sum / static_cast<double>(n);
    f_global[d + c] = best;
  }

  // offset network
  std::vector<double> act(f_global);
  for (size_t l = 0; l < params.phi.size(); ++l) {
    const auto& layer = params.phi[l];
    std::vector<double> next(layer.w.cols(), 0.0);
    for (size_t q = 0; q < layer.w.cols(); ++q) {
      double acc = layer.b(0, q);
      for (size_t r = 0; r < layer.w.rows(); ++r) acc += act[r] * layer.w(r, q);
      next[q] = (l + 1 < params.phi.size()) ? activate(params.activation, acc) : acc;
    }
    act = std::move(next);
  }

  Matrix prototypes(m, d);
  for (size_t e = 0; e < m; ++e)
    for (size_t c = 0; c < d; ++c) prototypes(e, c) = params.p0(e, c) + act[e * d + c];

  // pre-projection
  Matrix x_proj(n, d);
  for (size_t i = 0; i < n; ++i)
    for (size_t c = 0; c < d; ++c) {
      double acc = 0.0;
      for (size_t k = 0; k < d; ++k) acc += x(i, k) * params.w_pre(k, c);
      x_proj(i, c) = acc;
    }

  // head-wise scaled dot products, averaged over heads
  Matrix s(n, m);
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(d_head));
  for (size_t i = 0; i < n; ++i)
    for (size_t e = 0; e < m; ++e) {
      double mean = 0.0;
      for (size_t tau = 0; tau < h; ++tau) {
        double dot = 0.0;
        for (size_t c = tau * d_head; c < (tau + 1) * d_head; ++c)
          dot += x_proj(i, c) * prototypes(e, c);
        mean += dot * inv_sqrt;
      }
      s(i, e) = mean / static_cast<double>(h);
    }

  // normalization, textbook form
  Matrix a(n, m);
  if (params.norm == NormMode::kENorm) {
    for (size_t e = 0; e < m; ++e) {
      double denom = 0.0;
      for (size_t i = 0; i < n; ++i) denom += std::exp(s(i, e));
      for (size_t i = 0; i < n; ++i) a(i, e) = std::exp(s(i, e)) / denom;
    }
  } else if (params.norm == NormMode::kVNorm) {
    for (size_t i = 0; i < n; ++i) {
      double denom = 0.0;
      for (size_t e = 0; e < m; ++e) denom += std::exp(s(i, e));
      for (size_t e = 0; e < m; ++e) a(i, e) = std::exp(s(i, e)) / denom;
    }
  } else {
    a = s;
  }

  Matrix f_e_act = ref_aggregate_v_to_e(a, x, params.w_e, params.activation);
  Matrix out = ref_disseminate_e_to_v(a, f_e_act, params.w_n, params.activation);
  if (params.residual)
    for (size_t i = 0; i < n; ++i)
      for (size_t c = 0; c < d; ++c) out(i, c) += x(i, c);
  return out;
}

double OracleResult::worst() const {
  return std::max({worst_aggregate, worst_disseminate, worst_forward});
}

std::string OracleResult::summary() const {
  std::ostringstream os;
  os << "oracle suite: " << instances << " instances\n";
  os << "  aggregate   max |dev| = " << worst_aggregate << "\n";
  os << "  disseminate max |dev| = " << worst_disseminate << "\n";
  os << "  forward     max |dev| = " << worst_forward << "\n";
  return os.str();
}

OracleResult run_oracle_suite(uint64_t seed, size_t instances) {
  OracleResult result;
  result.instances = instances;
  Rng rng(seed);
  const NormMode modes[] = {NormMode::kENorm, NormMode::kVNorm, NormMode::kNone};
  const Activation acts[] = {Activation::kRelu, Activation::kGelu, Activation::kIdentity};
  for (size_t t = 0; t < instances; ++t) {
    BlockConfig cfg;
    cfg.heads = 1 + rng.below(2);
    cfg.dim = cfg.heads * (1 + rng.below(8 / cfg.heads));  // D <= 8, divisible by heads
    cfg.hyperedges = 1 + rng.below(16);
    cfg.edge_dim = 1 + rng.below(8);
    cfg.norm = modes[t % 3];
    cfg.activation = acts[(t / 3) % 3];
    cfg.residual = (t % 2) == 0;
    cfg.out_dim = cfg.residual ? cfg.dim : 1 + rng.below(8);
    Rng prng(rng.next_u64());
    SoftHGParams params = init_params(cfg, prng);

    const size_t n = 1 + rng.below(16);
    Matrix x(n, cfg.dim);
    for (size_t i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();

    BlockOutput out = softhgnn_forward(x, params);
    result.worst_forward = std::max(result.worst_forward,
                                    max_abs_diff(out.x_out, ref_softhgnn_forward(x, params)));

    const Matrix& a = out.cache.part.a;
    Matrix agg = aggregate_v_to_e(a, x, params.w_e, params.activation);
    result.worst_aggregate =
        std::max(result.worst_aggregate,
                 max_abs_diff(agg, ref_aggregate_v_to_e(a, x, params.w_e, params.activation)));
    Matrix dis = disseminate_e_to_v(a, agg, params.w_n, params.activation);
    result.worst_disseminate =
        std::max(result.worst_disseminate,
                 max_abs_diff(dis, ref_disseminate_e_to_v(a, agg, params.w_n,
                                                          params.activation)));
  }
  return result;
}

}  // namespace softhg
