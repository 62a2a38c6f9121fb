// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace softhg {

std::string to_string(Activation act) {
  switch (act) {
    case Activation::kRelu: return "relu";
    case Activation::kGelu: return "gelu";
    case Activation::kIdentity: return "identity";
  }
  return "relu";
}

std::string to_string(NormMode mode) {
  switch (mode) {
    case NormMode::kENorm: return "enorm";
    case NormMode::kVNorm: return "vnorm";
    case NormMode::kNone: return "none";
  }
  return "enorm";
}

Activation activation_from_string(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "gelu") return Activation::kGelu;
  if (name == "identity") return Activation::kIdentity;
  throw ConfigError("unknown activation '" + name + "' (expected relu, gelu or identity)");
}

NormMode norm_mode_from_string(const std::string& name) {
  if (name == "enorm") return NormMode::kENorm;
  if (name == "vnorm") return NormMode::kVNorm;
  if (name == "none") return NormMode::kNone;
  throw ConfigError("unknown norm mode '" + name + "' (expected enorm, vnorm or none)");
}

size_t SoftHGParams::head_dim() const {
  if (heads == 0 || dim() % heads != 0) {
    throw ConfigError("head count " + std::to_string(heads) +
                      " does not divide feature dimension " + std::to_string(dim()));
  }
  return dim() / heads;
}

void SoftHGParams::validate() const {
  head_dim();
  const size_t d = dim(), m = hyperedges();
  if (phi.empty()) throw ConfigError("offset network has no layers");
  if (phi.front().w.rows() != 2 * d) {
    throw ShapeError("offset network input is " + phi.front().w.shape_str() +
                     ", expected " + std::to_string(2 * d) + " rows");
  }
  if (phi.back().w.cols() != m * d || phi.back().b.cols() != m * d) {
    throw ShapeError("offset network output is " + phi.back().w.shape_str() +
                     ", expected " + std::to_string(m * d) + " columns");
  }
  for (size_t l = 0; l + 1 < phi.size(); ++l) {
    if (phi[l].w.cols() != phi[l + 1].w.rows()) {
      throw ShapeError("offset network layers disagree: " + phi[l].w.shape_str() +
                       " then " + phi[l + 1].w.shape_str());
    }
  }
  for (const auto& layer : phi) {
    if (layer.b.rows() != 1 || layer.b.cols() != layer.w.cols()) {
      throw ShapeError("offset network bias is " + layer.b.shape_str() +
                       ", expected 1x" + std::to_string(layer.w.cols()));
    }
  }
  if (w_pre.rows() != d || w_pre.cols() != d) {
    throw ShapeError("w_pre is " + w_pre.shape_str() + ", expected " +
                     std::to_string(d) + "x" + std::to_string(d));
  }
  if (w_e.cols() != d) {
    throw ShapeError("w_e is " + w_e.shape_str() + ", expected " +
                     std::to_string(w_e.rows()) + "x" + std::to_string(d));
  }
  if (w_n.cols() != w_e.rows()) {
    throw ShapeError("w_n is " + w_n.shape_str() + ", expected columns to match w_e rows (" +
                     std::to_string(w_e.rows()) + ")");
  }
  if (residual && out_dim() != d) {
    throw ConfigError("residual connection requires output dim " + std::to_string(out_dim()) +
                      " to equal input dim " + std::to_string(d));
  }
}

namespace {

Matrix uniform_fan_in(size_t rows, size_t cols, size_t fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Matrix m(rows, cols);
  for (size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-bound, bound);
  return m;
}

}  // namespace

SoftHGParams init_params(const BlockConfig& cfg, Rng& rng) {
  if (cfg.dim == 0 || cfg.hyperedges == 0) {
    throw ConfigError("block needs dim >= 1 and hyperedges >= 1");
  }
  if (cfg.heads == 0 || cfg.dim % cfg.heads != 0) {
    throw ConfigError("head count " + std::to_string(cfg.heads) +
                      " does not divide feature dimension " + std::to_string(cfg.dim));
  }
  const size_t d = cfg.dim;
  const size_t m = cfg.hyperedges;
  const size_t d_edge = cfg.edge_dim == 0 ? d : cfg.edge_dim;
  const size_t d_out = cfg.out_dim == 0 ? d : cfg.out_dim;

  SoftHGParams p;
  p.heads = cfg.heads;
  p.norm = cfg.norm;
  p.activation = cfg.activation;
  p.residual = cfg.residual && d_out == d;

  p.p0 = uniform_fan_in(m, d, d, rng);
  if (cfg.phi_hidden == 0) {
    p.phi.push_back({uniform_fan_in(2 * d, m * d, 2 * d, rng),
                     uniform_fan_in(1, m * d, 2 * d, rng)});
  } else {
    p.phi.push_back({uniform_fan_in(2 * d, cfg.phi_hidden, 2 * d, rng),
                     uniform_fan_in(1, cfg.phi_hidden, 2 * d, rng)});
    p.phi.push_back({uniform_fan_in(cfg.phi_hidden, m * d, cfg.phi_hidden, rng),
                     uniform_fan_in(1, m * d, cfg.phi_hidden, rng)});
  }
  p.w_pre = uniform_fan_in(d, d, d, rng);
  p.w_e = uniform_fan_in(d_edge, d, d, rng);
  p.w_n = uniform_fan_in(d_out, d_edge, d_edge, rng);
  p.validate();
  return p;
}

ParamTensors zeros_like(const ParamTensors& p) {
  ParamTensors z;
  z.p0 = Matrix(p.p0.rows(), p.p0.cols());
  for (const auto& layer : p.phi) {
    z.phi.push_back({Matrix(layer.w.rows(), layer.w.cols()),
                     Matrix(layer.b.rows(), layer.b.cols())});
  }
  z.w_pre = Matrix(p.w_pre.rows(), p.w_pre.cols());
  z.w_e = Matrix(p.w_e.rows(), p.w_e.cols());
  z.w_n = Matrix(p.w_n.rows(), p.w_n.cols());
  return z;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json j;
  j["shape"] = {m.rows(), m.cols()};
  j["data"] = std::vector<double>(m.values().begin(), m.values().end());
  return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto shape = j.at("shape");
  const size_t rows = shape.at(0).get<size_t>();
  const size_t cols = shape.at(1).get<size_t>();
  auto data = j.at("data").get<std::vector<double>>();
  return Matrix(rows, cols, std::move(data));
}

}  // namespace

std::string params_to_json(const SoftHGParams& p) {
  nlohmann::json j;
  p.for_each([&](const char* name, const Matrix& m) { j[name] = matrix_to_json(m); });
  j["heads"] = p.heads;
  j["norm"] = to_string(p.norm);
  j["activation"] = to_string(p.activation);
  j["residual"] = p.residual;
  return j.dump(2);
}

SoftHGParams params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("parameter JSON parse failed: ") + e.what());
  }
  try {
    SoftHGParams p;
    p.p0 = matrix_from_json(j.at("p0"));
    if (j.contains("w_phi_hidden")) {
      p.phi.push_back({matrix_from_json(j.at("w_phi_hidden")),
                       matrix_from_json(j.at("b_phi_hidden"))});
    }
    p.phi.push_back({matrix_from_json(j.at("w_phi")), matrix_from_json(j.at("b_phi"))});
    p.w_pre = matrix_from_json(j.at("w_pre"));
    p.w_e = matrix_from_json(j.at("w_e"));
    p.w_n = matrix_from_json(j.at("w_n"));
    p.heads = j.at("heads").get<size_t>();
    p.norm = norm_mode_from_string(j.at("norm").get<std::string>());
    p.activation = activation_from_string(j.at("activation").get<std::string>());
    p.residual = j.at("residual").get<bool>();
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("parameter JSON is missing fields: ") + e.what());
  }
}

void save_params(const SoftHGParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << params_to_json(p) << "\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

SoftHGParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  return params_from_json(buf.str());
}

}  // namespace softhg
