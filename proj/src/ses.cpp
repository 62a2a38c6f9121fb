// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "ses.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "errors.hpp"

namespace softhg {

void SeSConfig::validate() const {
  if (k == 0 || k > m_dyn) {
    throw ConfigError("top-k of " + std::to_string(k) + " is outside [1, m_dyn=" +
                      std::to_string(m_dyn) + "]");
  }
  if (window == 0) throw ConfigError("selection window must be >= 1");
}

std::vector<double> activation_scores(const Matrix& s_dyn) {
  return col_sums(s_dyn);
}

std::vector<size_t> select_topk(std::span<const double> g, size_t k) {
  if (k > g.size()) {
    throw ConfigError("top-k of " + std::to_string(k) + " exceeds " +
                      std::to_string(g.size()) + " candidates");
  }
  std::vector<size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(k), order.end(),
                    [&](size_t a, size_t b) {
                      if (g[a] != g[b]) return g[a] > g[b];
                      return a < b;  // ties toward the lower index
                    });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

Participation build_participation_ses(const Matrix& s_fixed, const Matrix& s_dyn,
                                      std::span<const size_t> sel) {
  if (s_fixed.rows() != s_dyn.rows() && s_fixed.size() != 0) {
    throw ShapeError("fixed scores are " + s_fixed.shape_str() + ", dynamic scores are " +
                     s_dyn.shape_str());
  }
  const size_t n = s_dyn.rows();
  const size_t m_fixed = s_fixed.size() == 0 ? 0 : s_fixed.cols();
  Matrix s_active(n, m_fixed + sel.size());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m_fixed; ++j) s_active(i, j) = s_fixed(i, j);
    for (size_t j = 0; j < sel.size(); ++j) {
      if (sel[j] >= s_dyn.cols()) {
        throw ShapeError("selected column " + std::to_string(sel[j]) +
                         " is outside dynamic scores " + s_dyn.shape_str());
      }
      s_active(i, m_fixed + j) = s_dyn(i, sel[j]);
    }
  }
  Participation part;
  part.mode = NormMode::kENorm;
  part.s_raw = s_active;
  part.a = softmax_cols(s_active);
  return part;
}

SeSState::SeSState(SeSConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  ring_.assign(cfg_.window * cfg_.m_dyn, 0);
  counts_.assign(cfg_.m_dyn, 0);
  p_.assign(cfg_.m_dyn, 0.0);
}

void SeSState::reset() {
  std::fill(ring_.begin(), ring_.end(), 0);
  std::fill(counts_.begin(), counts_.end(), 0);
  std::fill(p_.begin(), p_.end(), 0.0);
  passes_ = 0;
}

double SeSState::record_and_balance(std::span<const size_t> sel) {
  if (sel.size() != cfg_.k) {
    throw ConfigError("selection has " + std::to_string(sel.size()) + " entries, expected k=" +
                      std::to_string(cfg_.k));
  }
  uint8_t* slot = ring_.data() + (passes_ % cfg_.window) * cfg_.m_dyn;
  if (passes_ >= cfg_.window) {
    for (size_t j = 0; j < cfg_.m_dyn; ++j)
      if (slot[j]) --counts_[j];
  }
  std::fill(slot, slot + cfg_.m_dyn, 0);
  for (size_t j : sel) {
    if (j >= cfg_.m_dyn) {
      throw ConfigError("selected index " + std::to_string(j) + " is outside m_dyn=" +
                        std::to_string(cfg_.m_dyn));
    }
    slot[j] = 1;
    ++counts_[j];
  }
  ++passes_;
  const double horizon = static_cast<double>(std::min(passes_, cfg_.window));
  for (size_t j = 0; j < cfg_.m_dyn; ++j) p_[j] = counts_[j] / horizon;
  return lb_loss();
}

double SeSState::lb_loss() const {
  const double target = static_cast<double>(cfg_.k) / static_cast<double>(cfg_.m_dyn);
  double acc = 0.0;
  for (double pj : p_) {
    const double dev = pj - target;
    acc += dev * dev;
  }
  return acc / static_cast<double>(cfg_.m_dyn);
}

std::string SeSState::dump_json() const {
  nlohmann::json j;
  j["p"] = p_;
  j["passes_seen"] = passes_;
  j["window"] = cfg_.window;
  return j.dump();
}

}  // namespace softhg
