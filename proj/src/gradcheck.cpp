// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace softhg {

std::vector<double> finite_diff(const std::function<double(std::span<const double>)>& loss,
                                std::span<const double> theta, double step) {
  if (step <= 0.0) throw ConfigError("finite_diff step must be > 0");
  std::vector<double> point(theta.begin(), theta.end());
  std::vector<double> grad(theta.size());
  for (size_t i = 0; i < point.size(); ++i) {
    const double saved = point[i];
    point[i] = saved + step;
    const double up = loss(point);
    point[i] = saved - step;
    const double down = loss(point);
    point[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw NumericError("finite_diff: non-finite loss at coordinate " + std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * step);
  }
  return grad;
}

namespace {

// relative error with a floor so near-zero gradients do not blow up the ratio
double rel_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

double sum_of_squares(const Matrix& m) {
  double acc = 0.0;
  for (double v : m.values()) acc += v * v;
  return acc;
}

// Smallest distance of any pre-activation from a relu kink, plus the smallest
// runner-up margin in the max pool. Finite differences need these clear of
// the step size.
double kink_margin(const BlockCache& cache, const SoftHGParams& params) {
  double margin = std::numeric_limits<double>::infinity();
  if (params.activation == Activation::kRelu) {
    for (double v : cache.u_pre.values()) margin = std::min(margin, std::abs(v));
    for (double v : cache.v_pre.values()) margin = std::min(margin, std::abs(v));
    for (const Matrix& pre : cache.phi.hidden_pre)
      for (double v : pre.values()) margin = std::min(margin, std::abs(v));
  }
  const Matrix& x = cache.x;
  for (size_t c = 0; c < x.cols(); ++c) {
    const size_t winner = cache.pool.max_rows[c];
    for (size_t i = 0; i < x.rows(); ++i) {
      if (i != winner) margin = std::min(margin, x(winner, c) - x(i, c));
    }
  }
  return margin;
}

struct CaseSetup {
  SoftHGParams params;
  Matrix x;
};

CaseSetup draw_case(const GradCheckConfig& cfg, NormMode norm, bool residual,
                    uint64_t seed) {
  // deterministic redraw: bump the sub-seed until all margins clear the kinks
  for (uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed + attempt * 0x5851f42d4c957f2dull + 1);
    BlockConfig bc;
    bc.dim = cfg.d;
    bc.hyperedges = cfg.m;
    bc.heads = cfg.heads;
    bc.phi_hidden = cfg.phi_hidden;
    bc.norm = norm;
    bc.activation = cfg.activation;
    bc.residual = residual;
    CaseSetup setup;
    setup.params = init_params(bc, rng);
    setup.x = Matrix(cfg.n, cfg.d);
    for (size_t i = 0; i < setup.x.size(); ++i) setup.x.data()[i] = rng.normal();
    BlockOutput probe = softhgnn_forward(setup.x, setup.params);
    if (kink_margin(probe.cache, setup.params) > 200.0 * cfg.step) return setup;
  }
}

TensorStat compare(const std::string& name, const Matrix& analytic,
                   std::span<const double> numeric) {
  TensorStat stat;
  stat.name = name;
  for (size_t i = 0; i < analytic.size(); ++i) {
    const double rel = rel_error(analytic.data()[i], numeric[i]);
    const double abs = std::abs(analytic.data()[i] - numeric[i]);
    stat.max_abs = std::max(stat.max_abs, abs);
    if (rel > stat.max_rel) {
      stat.max_rel = rel;
      stat.worst_index = i;
    }
  }
  return stat;
}

}  // namespace

GradReport check_block(const GradCheckConfig& cfg, uint64_t seed,
                       const std::function<void(BlockGrads&)>& corrupt) {
  GradReport report;
  report.tolerance = cfg.tolerance;

  const NormMode modes[] = {NormMode::kENorm, NormMode::kVNorm, NormMode::kNone};
  for (NormMode norm : modes) {
    for (bool residual : {true, false}) {
      CaseSetup setup = draw_case(cfg, norm, residual, seed);
      const SoftHGParams& params = setup.params;
      const Matrix& x = setup.x;

      BlockOutput out = softhgnn_forward(x, params);
      BlockGrads grads = softhgnn_backward(out, params, scaled(out.x_out, 2.0));
      if (corrupt) corrupt(grads);

      CaseReport case_report;
      case_report.norm = norm;
      case_report.residual = residual;

      // one finite-difference sweep per parameter tensor
      params.for_each([&](const char* name, const Matrix& tensor) {
        auto loss = [&](std::span<const double> theta) {
          SoftHGParams probe = params;
          Matrix* target = nullptr;
          probe.for_each([&](const char* pname, Matrix& m) {
            if (std::string(pname) == name) target = &m;
          });
          std::copy(theta.begin(), theta.end(), target->values().begin());
          return sum_of_squares(softhgnn_forward(x, probe).x_out);
        };
        std::vector<double> numeric = finite_diff(loss, tensor.values(), cfg.step);
        const Matrix* analytic = nullptr;
        grads.for_each([&](const char* gname, Matrix& m) {
          if (std::string(gname) == name) analytic = &m;
        });
        case_report.tensors.push_back(compare(name, *analytic, numeric));
      });

      // and one for the input
      {
        auto loss = [&](std::span<const double> theta) {
          Matrix probe(x.rows(), x.cols(), std::vector<double>(theta.begin(), theta.end()));
          return sum_of_squares(softhgnn_forward(probe, params).x_out);
        };
        std::vector<double> numeric = finite_diff(loss, x.values(), cfg.step);
        case_report.tensors.push_back(compare("x", grads.d_x, numeric));
      }

      for (const TensorStat& stat : case_report.tensors) {
        if (stat.max_rel >= cfg.tolerance) case_report.passed = false;
        if (stat.max_rel > report.worst_rel) {
          report.worst_rel = stat.max_rel;
          report.worst_name = stat.name;
        }
      }
      report.passed = report.passed && case_report.passed;
      report.cases.push_back(std::move(case_report));
    }
  }
  return report;
}

std::string GradReport::to_text() const {
  std::ostringstream os;
  for (const CaseReport& c : cases) {
    os << "norm=" << to_string(c.norm) << " residual=" << (c.residual ? "on" : "off")
       << "\n";
    for (const TensorStat& t : c.tensors) {
      os << "  " << std::left << std::setw(14) << t.name << std::scientific
         << std::setprecision(3) << "max_rel=" << t.max_rel << "  max_abs=" << t.max_abs
         << "  worst=[" << t.worst_index << "]\n";
    }
  }
  os << "worst: " << worst_name << " rel_err=" << std::scientific << std::setprecision(3)
     << worst_rel << " (tol " << tolerance << ")\n";
  os << "result: " << (passed ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string GradReport::to_json() const {
  nlohmann::json j;
  j["tolerance"] = tolerance;
  j["passed"] = passed;
  j["worst"] = {{"name", worst_name}, {"rel_error", worst_rel}};
  j["cases"] = nlohmann::json::array();
  for (const CaseReport& c : cases) {
    nlohmann::json jc;
    jc["norm"] = to_string(c.norm);
    jc["residual"] = c.residual;
    jc["passed"] = c.passed;
    jc["tensors"] = nlohmann::json::array();
    for (const TensorStat& t : c.tensors) {
      jc["tensors"].push_back({{"name", t.name},
                               {"max_rel", t.max_rel},
                               {"max_abs", t.max_abs},
                               {"worst_index", t.worst_index}});
    }
    j["cases"].push_back(std::move(jc));
  }
  return j.dump(2);
}

}  // namespace softhg
