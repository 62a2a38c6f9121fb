// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "generation.hpp"
#include "matrix.hpp"

namespace softhg {

struct SeSConfig {
  size_t m_fixed = 16;
  size_t m_dyn = 32;
  size_t k = 16;
  size_t window = 64;  // forward passes tracked for activation probabilities

  size_t total() const { return m_fixed + m_dyn; }
  void validate() const;  // 1 <= k <= m_dyn, window >= 1
};

// g_j: per-dynamic-hyperedge activation score, the column sum of the raw
// (pre-softmax) dynamic score slice.
std::vector<double> activation_scores(const Matrix& s_dyn);

// Indices of the k largest scores, ties broken toward the lower index,
// returned sorted ascending.
std::vector<size_t> select_topk(std::span<const double> g, size_t k);

// S' = [s_fixed | s_dyn[:, sel]]; the participation matrix is the column
// softmax of S' (every active column sums to 1 over vertices).
Participation build_participation_ses(const Matrix& s_fixed, const Matrix& s_dyn,
                                      std::span<const size_t> sel);

// Rolling selection statistics over the last `window` passes plus the
// load-balancing loss: mean squared deviation of each dynamic hyperedge's
// activation probability from the uniform target k/m_dyn.
class SeSState {
 public:
  explicit SeSState(SeSConfig cfg);

  // Push the mask for one forward pass, refresh the probabilities, return the
  // load-balancing loss.
  double record_and_balance(std::span<const size_t> sel);

  double lb_loss() const;
  std::span<const double> activation_probabilities() const { return p_; }
  size_t passes_seen() const { return passes_; }
  const SeSConfig& config() const { return cfg_; }
  void reset();

  std::string dump_json() const;  // {"p":[...],"passes_seen":n,"window":T}

 private:
  SeSConfig cfg_;
  std::vector<uint8_t> ring_;     // window × m_dyn selection masks
  std::vector<uint32_t> counts_;  // selections per hyperedge within the window
  std::vector<double> p_;
  size_t passes_ = 0;
};

}  // namespace softhg
