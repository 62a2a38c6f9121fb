// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "message.hpp"

namespace softhg {

enum class ModelKind { kPoolBaseline, kSoftHGNN, kSoftHGNNSeS };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct TrainConfig {
  ModelKind model = ModelKind::kSoftHGNN;
  size_t epochs = 10;
  double lr = 0.1;
  size_t batch = 8;
  uint64_t seed = 7;
  double momentum = 0.9;      // 0 gives plain SGD
  double lb_weight = 1.0;     // load-balancing term is added to the loss as-is
  double eval_fraction = 0.2;
  BlockConfig block{.dim = 0, .hyperedges = 8, .heads = 8};  // dim filled from data
  SeSConfig ses{.m_fixed = 16, .m_dyn = 32, .k = 16, .window = 64};
  DatasetConfig data;
  std::string params_in;   // load the block parameters instead of seeding them
  std::string params_out;  // save the trained block parameters

  void validate() const;
};

std::string train_config_to_json(const TrainConfig& cfg);
// Missing fields keep their defaults.
TrainConfig train_config_from_json(const std::string& text);

// Mean-pooled features through one affine classification head; the block (if
// any) runs underneath.
struct Model {
  ModelKind kind = ModelKind::kSoftHGNN;
  SoftHGParams block;  // untouched for the pool baseline
  std::optional<SeSConfig> ses;
  Matrix w_cls;  // C×F
  Matrix b_cls;  // 1×C
};

std::vector<double> model_logits(const Model& model, const Matrix& tokens);
// argmax with ties toward the lower class index
size_t predict(const Model& model, const Matrix& tokens);
double evaluate(const Model& model, const GroupDataset& data);

struct EpochRow {
  size_t epoch;
  std::string split;  // "train" or "eval"
  double loss;
  double accuracy;
  double l_lb;
};

struct TrainResult {
  std::vector<EpochRow> rows;
  double final_train_accuracy = 0.0;
  double final_eval_accuracy = 0.0;
  Model model;
  std::optional<SeSState> ses_state;
};

// Mini-batch SGD (optional momentum) on a deterministic train/eval split of
// `data`; every source of randomness is seeded. Non-finite loss aborts with
// the epoch and step in the message.
TrainResult train_loop(const TrainConfig& cfg, const GroupDataset& data);

// epoch,split,loss,accuracy,l_lb
std::string metrics_csv(const TrainResult& result);
void write_metrics_csv(const std::string& path, const TrainResult& result);

}  // namespace softhg
