// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "dataset.hpp"

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace softhg {

void DatasetConfig::validate() const {
  if (n_classes < 2) throw ConfigError("dataset needs at least 2 classes");
  if (dim == 0 || tokens == 0 || n_samples == 0) {
    throw ConfigError("dataset needs positive sample, token and feature counts");
  }
  if (groups_per_class == 0 || tokens_per_group == 0) {
    throw ConfigError("dataset needs at least one group with at least one token");
  }
  if (tokens < groups_per_class * tokens_per_group) {
    throw ConfigError("sample of " + std::to_string(tokens) + " tokens cannot hold " +
                      std::to_string(groups_per_class) + " groups of " +
                      std::to_string(tokens_per_group));
  }
  if (group_noise < 0.0 || background_noise < 0.0) {
    throw ConfigError("noise scales must be >= 0");
  }
}

namespace {

// unit-length random direction; noise is scaled by 1/sqrt(D) so the noise
// vector norm is about the given scale
std::vector<double> unit_vector(size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  double norm_sq = 0.0;
  for (double& e : v) {
    e = rng.normal();
    norm_sq += e * e;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& e : v) e *= inv;
  return v;
}

}  // namespace

GroupDataset gen_group_dataset(const DatasetConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  // latent variant vectors, one set per slot
  std::vector<std::vector<std::vector<double>>> variants(cfg.groups_per_class);
  for (auto& slot : variants) {
    slot.resize(cfg.n_classes);
    for (auto& v : slot) v = unit_vector(cfg.dim, rng);
  }

  GroupDataset data;
  data.n_classes = cfg.n_classes;
  data.config = cfg;
  data.tokens.reserve(cfg.n_samples);
  data.labels.reserve(cfg.n_samples);

  const double noise_scale = 1.0 / std::sqrt(static_cast<double>(cfg.dim));
  for (size_t s = 0; s < cfg.n_samples; ++s) {
    Matrix x(cfg.tokens, cfg.dim);
    size_t label = 0;
    size_t row = 0;
    for (size_t slot = 0; slot < cfg.groups_per_class; ++slot) {
      const size_t variant = rng.below(cfg.n_classes);
      label = (label + variant) % cfg.n_classes;
      const auto& v = variants[slot][variant];
      for (size_t t = 0; t < cfg.tokens_per_group; ++t, ++row) {
        for (size_t c = 0; c < cfg.dim; ++c) {
          x(row, c) = v[c] + cfg.group_noise * noise_scale * rng.normal();
        }
      }
    }
    for (; row < cfg.tokens; ++row) {
      for (size_t c = 0; c < cfg.dim; ++c) {
        x(row, c) = cfg.background_noise * noise_scale * rng.normal();
      }
    }
    // shuffle rows so position carries nothing
    for (size_t i = cfg.tokens; i > 1; --i) {
      const size_t j = rng.below(i);
      if (j != i - 1) {
        for (size_t c = 0; c < cfg.dim; ++c) std::swap(x(i - 1, c), x(j, c));
      }
    }
    data.tokens.push_back(std::move(x));
    data.labels.push_back(label);
  }
  return data;
}

GroupDataset gen_group_dataset(uint64_t seed, size_t n_samples, size_t tokens, size_t dim,
                               size_t n_classes) {
  DatasetConfig cfg;
  cfg.seed = seed;
  cfg.n_samples = n_samples;
  cfg.tokens = tokens;
  cfg.dim = dim;
  cfg.n_classes = n_classes;
  return gen_group_dataset(cfg);
}

}  // namespace softhg
