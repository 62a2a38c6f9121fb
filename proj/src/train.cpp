// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace softhg {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kPoolBaseline: return "pool";
    case ModelKind::kSoftHGNN: return "softhgnn";
    case ModelKind::kSoftHGNNSeS: return "softhgnn_ses";
  }
  return "softhgnn";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "pool") return ModelKind::kPoolBaseline;
  if (name == "softhgnn") return ModelKind::kSoftHGNN;
  if (name == "softhgnn_ses") return ModelKind::kSoftHGNNSeS;
  throw ConfigError("unknown model kind '" + name +
                    "' (expected pool, softhgnn or softhgnn_ses)");
}

void TrainConfig::validate() const {
  if (epochs == 0 || batch == 0) throw ConfigError("epochs and batch size must be >= 1");
  if (lr < 0.0) throw ConfigError("learning rate must be >= 0");
  if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must be in [0, 1)");
  if (lb_weight < 0.0) throw ConfigError("load-balancing weight must be >= 0");
  if (eval_fraction <= 0.0 || eval_fraction >= 1.0) {
    throw ConfigError("eval fraction must be in (0, 1)");
  }
  data.validate();
  if (model == ModelKind::kSoftHGNNSeS) ses.validate();
}

std::string train_config_to_json(const TrainConfig& cfg) {
  nlohmann::json j;
  j["model"] = to_string(cfg.model);
  j["epochs"] = cfg.epochs;
  j["lr"] = cfg.lr;
  j["batch"] = cfg.batch;
  j["seed"] = cfg.seed;
  j["momentum"] = cfg.momentum;
  j["lb_weight"] = cfg.lb_weight;
  j["eval_fraction"] = cfg.eval_fraction;
  j["block"] = {{"hyperedges", cfg.block.hyperedges}, {"heads", cfg.block.heads},
                {"norm", to_string(cfg.block.norm)},
                {"activation", to_string(cfg.block.activation)},
                {"residual", cfg.block.residual}, {"phi_hidden", cfg.block.phi_hidden}};
  j["ses"] = {{"fixed", cfg.ses.m_fixed}, {"dyn", cfg.ses.m_dyn}, {"topk", cfg.ses.k},
              {"window", cfg.ses.window}};
  if (!cfg.params_in.empty()) j["params_in"] = cfg.params_in;
  if (!cfg.params_out.empty()) j["params_out"] = cfg.params_out;
  j["data"] = {{"seed", cfg.data.seed}, {"n_samples", cfg.data.n_samples},
               {"tokens", cfg.data.tokens}, {"dim", cfg.data.dim},
               {"classes", cfg.data.n_classes},
               {"groups_per_class", cfg.data.groups_per_class},
               {"tokens_per_group", cfg.data.tokens_per_group},
               {"group_noise", cfg.data.group_noise},
               {"background_noise", cfg.data.background_noise}};
  return j.dump(2);
}

TrainConfig train_config_from_json(const std::string& text) {
  TrainConfig cfg;
  if (text.empty()) return cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("train config parse failed: ") + e.what());
  }
  try {
    if (j.contains("model")) cfg.model = model_kind_from_string(j["model"].get<std::string>());
    if (j.contains("epochs")) cfg.epochs = j["epochs"].get<size_t>();
    if (j.contains("lr")) cfg.lr = j["lr"].get<double>();
    if (j.contains("batch")) cfg.batch = j["batch"].get<size_t>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("momentum")) cfg.momentum = j["momentum"].get<double>();
    if (j.contains("lb_weight")) cfg.lb_weight = j["lb_weight"].get<double>();
    if (j.contains("eval_fraction")) cfg.eval_fraction = j["eval_fraction"].get<double>();
    if (j.contains("params_in")) cfg.params_in = j["params_in"].get<std::string>();
    if (j.contains("params_out")) cfg.params_out = j["params_out"].get<std::string>();
    if (j.contains("block")) {
      const auto& b = j["block"];
      if (b.contains("hyperedges")) cfg.block.hyperedges = b["hyperedges"].get<size_t>();
      if (b.contains("heads")) cfg.block.heads = b["heads"].get<size_t>();
      if (b.contains("norm")) cfg.block.norm = norm_mode_from_string(b["norm"].get<std::string>());
      if (b.contains("activation"))
        cfg.block.activation = activation_from_string(b["activation"].get<std::string>());
      if (b.contains("residual")) cfg.block.residual = b["residual"].get<bool>();
      if (b.contains("phi_hidden")) cfg.block.phi_hidden = b["phi_hidden"].get<size_t>();
    }
    if (j.contains("ses")) {
      const auto& s = j["ses"];
      if (s.contains("fixed")) cfg.ses.m_fixed = s["fixed"].get<size_t>();
      if (s.contains("dyn")) cfg.ses.m_dyn = s["dyn"].get<size_t>();
      if (s.contains("topk")) cfg.ses.k = s["topk"].get<size_t>();
      if (s.contains("window")) cfg.ses.window = s["window"].get<size_t>();
    }
    if (j.contains("data")) {
      const auto& d = j["data"];
      if (d.contains("seed")) cfg.data.seed = d["seed"].get<uint64_t>();
      if (d.contains("n_samples")) cfg.data.n_samples = d["n_samples"].get<size_t>();
      if (d.contains("tokens")) cfg.data.tokens = d["tokens"].get<size_t>();
      if (d.contains("dim")) cfg.data.dim = d["dim"].get<size_t>();
      if (d.contains("classes")) cfg.data.n_classes = d["classes"].get<size_t>();
      if (d.contains("groups_per_class"))
        cfg.data.groups_per_class = d["groups_per_class"].get<size_t>();
      if (d.contains("tokens_per_group"))
        cfg.data.tokens_per_group = d["tokens_per_group"].get<size_t>();
      if (d.contains("group_noise")) cfg.data.group_noise = d["group_noise"].get<double>();
      if (d.contains("background_noise"))
        cfg.data.background_noise = d["background_noise"].get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("train config has bad fields: ") + e.what());
  }
  return cfg;
}

namespace {

std::vector<double> mean_pool(const Matrix& m) { return col_means(m); }

std::vector<double> head_logits(const Model& model, std::span<const double> pooled) {
  const size_t n_classes = model.w_cls.rows();
  std::vector<double> z(n_classes);
  for (size_t c = 0; c < n_classes; ++c) {
    double acc = model.b_cls(0, c);
    for (size_t f = 0; f < pooled.size(); ++f) acc += model.w_cls(c, f) * pooled[f];
    z[c] = acc;
  }
  return z;
}

size_t argmax_low_tie(std::span<const double> z) {
  size_t best = 0;
  for (size_t c = 1; c < z.size(); ++c)
    if (z[c] > z[best]) best = c;
  return best;
}

// loss and dL/dz of softmax cross-entropy
double cross_entropy(std::span<const double> z, size_t label, std::vector<double>& dz) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double v : z) sum += std::exp(v - zmax);
  const double lse = std::log(sum) + zmax;
  dz.resize(z.size());
  for (size_t c = 0; c < z.size(); ++c) dz[c] = std::exp(z[c] - lse);
  dz[label] -= 1.0;
  return lse - z[label];
}

Model init_model(const TrainConfig& cfg, size_t n_classes, Rng& rng) {
  Model model;
  model.kind = cfg.model;
  size_t feat_dim = cfg.data.dim;
  if (cfg.model != ModelKind::kPoolBaseline) {
    BlockConfig bc = cfg.block;
    bc.dim = cfg.data.dim;
    if (cfg.model == ModelKind::kSoftHGNNSeS) {
      bc.hyperedges = cfg.ses.total();
      model.ses = cfg.ses;
    }
    model.block = init_params(bc, rng);
    feat_dim = model.block.out_dim();
  }
  const double bound = 1.0 / std::sqrt(static_cast<double>(feat_dim));
  model.w_cls = Matrix(n_classes, feat_dim);
  for (size_t i = 0; i < model.w_cls.size(); ++i)
    model.w_cls.data()[i] = rng.uniform(-bound, bound);
  model.b_cls = Matrix(1, n_classes);
  return model;
}

struct SampleForward {
  std::optional<BlockOutput> block_out;
  std::vector<double> pooled;
  std::vector<double> logits;
};

SampleForward forward_sample(const Model& model, const Matrix& tokens) {
  SampleForward fwd;
  if (model.kind == ModelKind::kPoolBaseline) {
    fwd.pooled = mean_pool(tokens);
  } else if (model.kind == ModelKind::kSoftHGNNSeS) {
    fwd.block_out = softhgnn_forward_ses(tokens, model.block, *model.ses);
    fwd.pooled = mean_pool(fwd.block_out->x_out);
  } else {
    fwd.block_out = softhgnn_forward(tokens, model.block);
    fwd.pooled = mean_pool(fwd.block_out->x_out);
  }
  fwd.logits = head_logits(model, fwd.pooled);
  return fwd;
}

}  // namespace

std::vector<double> model_logits(const Model& model, const Matrix& tokens) {
  return forward_sample(model, tokens).logits;
}

size_t predict(const Model& model, const Matrix& tokens) {
  return argmax_low_tie(model_logits(model, tokens));
}

double evaluate(const Model& model, const GroupDataset& data) {
  if (data.size() == 0) return 0.0;
  size_t hits = 0;
  for (size_t s = 0; s < data.size(); ++s) {
    if (predict(model, data.tokens[s]) == data.labels[s]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

TrainResult train_loop(const TrainConfig& cfg, const GroupDataset& data) {
  cfg.validate();
  if (data.size() < 2) throw ConfigError("dataset too small to split");

  const size_t n_eval =
      std::max<size_t>(1, static_cast<size_t>(std::llround(cfg.eval_fraction *
                                                           static_cast<double>(data.size()))));
  const size_t n_train = data.size() - n_eval;
  if (n_train == 0) throw ConfigError("eval fraction leaves no training samples");

  Rng init_rng(cfg.seed);
  TrainResult result;
  result.model = init_model(cfg, data.n_classes, init_rng);
  Model& model = result.model;

  const bool has_block = model.kind != ModelKind::kPoolBaseline;
  if (!cfg.params_in.empty()) {
    if (!has_block) throw ConfigError("the pool baseline has no block parameters to load");
    SoftHGParams loaded = load_params(cfg.params_in);
    if (loaded.dim() != model.block.dim() ||
        loaded.hyperedges() != model.block.hyperedges() ||
        loaded.out_dim() != model.block.out_dim()) {
      throw ConfigError("loaded parameters are " + std::to_string(loaded.hyperedges()) +
                        "x" + std::to_string(loaded.dim()) + ", the configured block is " +
                        std::to_string(model.block.hyperedges()) + "x" +
                        std::to_string(model.block.dim()));
    }
    model.block = std::move(loaded);
  }
  const bool has_ses = model.kind == ModelKind::kSoftHGNNSeS;
  if (has_ses) result.ses_state.emplace(cfg.ses);

  // momentum state
  ParamTensors vel_block;
  if (has_block) vel_block = zeros_like(model.block);
  Matrix vel_w(model.w_cls.rows(), model.w_cls.cols());
  Matrix vel_b(1, model.b_cls.cols());

  std::vector<size_t> order(n_train);
  std::iota(order.begin(), order.end(), 0);

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    Rng shuffle_rng(cfg.seed * 0x9e3779b97f4a7c15ull + epoch + 1);
    for (size_t i = n_train; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng.below(i)]);
    }

    double epoch_loss = 0.0;
    double epoch_lb = 0.0;
    size_t epoch_hits = 0;

    for (size_t start = 0; start < n_train; start += cfg.batch) {
      const size_t stop = std::min(start + cfg.batch, n_train);
      const double inv_batch = 1.0 / static_cast<double>(stop - start);

      ParamTensors grad_block;
      if (has_block) grad_block = zeros_like(model.block);
      Matrix grad_w(model.w_cls.rows(), model.w_cls.cols());
      Matrix grad_b(1, model.b_cls.cols());

      for (size_t s = start; s < stop; ++s) {
        const Matrix& tokens = data.tokens[order[s]];
        const size_t label = data.labels[order[s]];
        SampleForward fwd = forward_sample(model, tokens);

        double lb = 0.0;
        if (has_ses) {
          lb = result.ses_state->record_and_balance(fwd.block_out->cache.ses->selected);
        }

        std::vector<double> dz;
        const double ce = cross_entropy(fwd.logits, label, dz);
        const double total = ce + cfg.lb_weight * lb;
        if (!std::isfinite(total)) {
          throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                             ", step " + std::to_string(start / cfg.batch));
        }
        epoch_loss += total;
        epoch_lb += lb;
        if (argmax_low_tie(fwd.logits) == label) ++epoch_hits;

        // head gradients; the pooled feature spreads evenly over tokens
        for (size_t c = 0; c < dz.size(); ++c) {
          grad_b(0, c) += dz[c];
          for (size_t f = 0; f < fwd.pooled.size(); ++f)
            grad_w(c, f) += dz[c] * fwd.pooled[f];
        }
        if (has_block) {
          const Matrix& x_out = fwd.block_out->x_out;
          Matrix d_out(x_out.rows(), x_out.cols());
          const double inv_tokens = 1.0 / static_cast<double>(x_out.rows());
          for (size_t f = 0; f < x_out.cols(); ++f) {
            double dpool = 0.0;
            for (size_t c = 0; c < dz.size(); ++c) dpool += dz[c] * model.w_cls(c, f);
            const double per_token = dpool * inv_tokens;
            for (size_t i = 0; i < x_out.rows(); ++i) d_out(i, f) = per_token;
          }
          BlockGrads bg = softhgnn_backward(*fwd.block_out, model.block, d_out);
          grad_block.for_each([&](const char* name, Matrix& g) {
            const Matrix* src = nullptr;
            bg.for_each([&](const char* bn, Matrix& m) {
              if (std::string(bn) == name) src = &m;
            });
            add_inplace(g, *src);
          });
        }
      }

      // momentum update with batch-averaged gradients
      auto update = [&](Matrix& param, Matrix& vel, const Matrix& grad) {
        for (size_t i = 0; i < param.size(); ++i) {
          vel.data()[i] = cfg.momentum * vel.data()[i] + grad.data()[i] * inv_batch;
          param.data()[i] -= cfg.lr * vel.data()[i];
        }
      };
      update(model.w_cls, vel_w, grad_w);
      update(model.b_cls, vel_b, grad_b);
      if (has_block) {
        model.block.for_each([&](const char* name, Matrix& param) {
          Matrix* vel = nullptr;
          Matrix* grad = nullptr;
          vel_block.for_each([&](const char* vn, Matrix& m) {
            if (std::string(vn) == name) vel = &m;
          });
          grad_block.for_each([&](const char* gn, Matrix& m) {
            if (std::string(gn) == name) grad = &m;
          });
          update(param, *vel, *grad);
        });
      }
    }

    const double inv_train = 1.0 / static_cast<double>(n_train);
    EpochRow train_row{epoch, "train", epoch_loss * inv_train,
                       static_cast<double>(epoch_hits) * inv_train, epoch_lb * inv_train};

    // eval split: no parameter updates, no selection recording
    double eval_loss = 0.0;
    size_t eval_hits = 0;
    for (size_t s = n_train; s < data.size(); ++s) {
      SampleForward fwd = forward_sample(model, data.tokens[s]);
      std::vector<double> dz;
      eval_loss += cross_entropy(fwd.logits, data.labels[s], dz);
      if (argmax_low_tie(fwd.logits) == data.labels[s]) ++eval_hits;
    }
    EpochRow eval_row{epoch, "eval", eval_loss / static_cast<double>(n_eval),
                      static_cast<double>(eval_hits) / static_cast<double>(n_eval),
                      has_ses ? result.ses_state->lb_loss() : 0.0};

    result.final_train_accuracy = train_row.accuracy;
    result.final_eval_accuracy = eval_row.accuracy;
    result.rows.push_back(std::move(train_row));
    result.rows.push_back(std::move(eval_row));
  }
  if (!cfg.params_out.empty() && has_block) save_params(model.block, cfg.params_out);
  return result;
}

std::string metrics_csv(const TrainResult& result) {
  std::ostringstream os;
  os << "epoch,split,loss,accuracy,l_lb\n";
  char buf[128];
  for (const EpochRow& row : result.rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%s,%.10g,%.10g,%.10g\n", row.epoch,
                  row.split.c_str(), row.loss, row.accuracy, row.l_lb);
    os << buf;
  }
  return os.str();
}

void write_metrics_csv(const std::string& path, const TrainResult& result) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << metrics_csv(result);
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace softhg
