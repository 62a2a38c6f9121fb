// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "matrix.hpp"

namespace softhg {

// Synthetic group co-occurrence task. Every sample carries `groups_per_class`
// latent slots; slot s is filled with one of n_classes variant vectors, and
// the label is the sum of the variant indices mod n_classes. Each variant
// appears in every class, so no single group identifies the label, and no
// additive function of the token mean can express the full assignment -- the
// label is only recoverable from which variants co-occur.
struct DatasetConfig {
  uint64_t seed = 1;
  size_t n_samples = 2400;
  size_t tokens = 12;            // N per sample
  size_t dim = 16;               // D
  size_t n_classes = 3;
  size_t groups_per_class = 2;   // latent slots per sample
  size_t tokens_per_group = 3;
  double group_noise = 0.25;     // noise scale on group tokens
  double background_noise = 1.0; // scale of pure-noise tokens

  void validate() const;
};

struct GroupDataset {
  std::vector<Matrix> tokens;   // each N×D
  std::vector<size_t> labels;   // in [0, n_classes)
  size_t n_classes = 0;
  DatasetConfig config;

  size_t size() const { return tokens.size(); }
};

GroupDataset gen_group_dataset(const DatasetConfig& cfg);
GroupDataset gen_group_dataset(uint64_t seed, size_t n_samples, size_t tokens, size_t dim,
                               size_t n_classes);

}  // namespace softhg
