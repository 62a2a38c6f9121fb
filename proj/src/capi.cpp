// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
#include "softhg.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bench.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "gradcheck.hpp"
#include "message.hpp"
#include "reference.hpp"
#include "rng.hpp"
#include "train.hpp"

using namespace softhg;

struct softhg_matrix {
  Matrix m;
};

struct softhg_block {
  SoftHGParams params;
};

struct softhg_ses {
  SeSConfig cfg;
  SeSState state;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
softhg_status guarded(Fn&& fn) {
  try {
    fn();
    return SOFTHG_OK;
  } catch (const ShapeError& e) {
    g_last_error = e.what();
    return SOFTHG_ERR_SHAPE;
  } catch (const ConfigError& e) {
    g_last_error = e.what();
    return SOFTHG_ERR_CONFIG;
  } catch (const NumericError& e) {
    g_last_error = e.what();
    return SOFTHG_ERR_NUMERIC;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return SOFTHG_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SOFTHG_ERR_ARGUMENT;
  }
}

softhg_status invalid_argument(const char* message) {
  g_last_error = message;
  return SOFTHG_ERR_ARGUMENT;
}

nlohmann::json parse_options(const char* text) {
  if (text == nullptr || *text == '\0') return nlohmann::json::object();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("options JSON parse failed: ") + e.what());
  }
}

NormMode norm_from_int(int v) {
  switch (v) {
    case SOFTHG_NORM_ENORM: return NormMode::kENorm;
    case SOFTHG_NORM_VNORM: return NormMode::kVNorm;
    case SOFTHG_NORM_NONE: return NormMode::kNone;
  }
  throw ConfigError("unknown norm mode code " + std::to_string(v));
}

Activation activation_from_int(int v) {
  switch (v) {
    case SOFTHG_ACT_RELU: return Activation::kRelu;
    case SOFTHG_ACT_GELU: return Activation::kGelu;
    case SOFTHG_ACT_IDENTITY: return Activation::kIdentity;
  }
  throw ConfigError("unknown activation code " + std::to_string(v));
}

}  // namespace

extern "C" {

const char* softhg_last_error(void) { return g_last_error.c_str(); }

const char* softhg_status_name(softhg_status status) {
  switch (status) {
    case SOFTHG_OK: return "ok";
    case SOFTHG_ERR_SHAPE: return "shape_error";
    case SOFTHG_ERR_CONFIG: return "config_error";
    case SOFTHG_ERR_NUMERIC: return "numeric_error";
    case SOFTHG_ERR_IO: return "io_error";
    case SOFTHG_ERR_ARGUMENT: return "argument_error";
  }
  return "unknown";
}

void softhg_string_free(char* s) { std::free(s); }

softhg_status softhg_matrix_create(size_t rows, size_t cols, const double* data,
                                   softhg_matrix** out) {
  if (!out) return invalid_argument("matrix_create: out is NULL");
  return guarded([&] {
    auto* wrapper = new softhg_matrix;
    if (data) {
      wrapper->m = Matrix(rows, cols, std::vector<double>(data, data + rows * cols));
    } else {
      wrapper->m = Matrix(rows, cols);
    }
    *out = wrapper;
  });
}

void softhg_matrix_destroy(softhg_matrix* m) { delete m; }

size_t softhg_matrix_rows(const softhg_matrix* m) { return m ? m->m.rows() : 0; }
size_t softhg_matrix_cols(const softhg_matrix* m) { return m ? m->m.cols() : 0; }

softhg_status softhg_matrix_read(const softhg_matrix* m, double* buffer,
                                 size_t buffer_len) {
  if (!m || !buffer) return invalid_argument("matrix_read: NULL argument");
  if (buffer_len < m->m.size()) {
    g_last_error = "matrix_read: buffer holds " + std::to_string(buffer_len) +
                   " values, matrix is " + m->m.shape_str();
    return SOFTHG_ERR_SHAPE;
  }
  std::memcpy(buffer, m->m.data(), m->m.size() * sizeof(double));
  return SOFTHG_OK;
}

void softhg_block_config_init(softhg_block_config* cfg, size_t dim) {
  if (!cfg) return;
  cfg->dim = dim;
  cfg->hyperedges = 8;
  cfg->heads = 8;
  cfg->phi_hidden = 0;
  cfg->norm = SOFTHG_NORM_ENORM;
  cfg->activation = SOFTHG_ACT_RELU;
  cfg->residual = 1;
}

softhg_status softhg_block_create(const softhg_block_config* cfg, uint64_t seed,
                                  softhg_block** out) {
  if (!cfg || !out) return invalid_argument("block_create: NULL argument");
  return guarded([&] {
    BlockConfig bc;
    bc.dim = cfg->dim;
    bc.hyperedges = cfg->hyperedges;
    bc.heads = cfg->heads;
    bc.phi_hidden = cfg->phi_hidden;
    bc.norm = norm_from_int(cfg->norm);
    bc.activation = activation_from_int(cfg->activation);
    bc.residual = cfg->residual != 0;
    Rng rng(seed);
    *out = new softhg_block{init_params(bc, rng)};
  });
}

void softhg_block_destroy(softhg_block* block) { delete block; }

softhg_status softhg_block_forward(const softhg_block* block, const softhg_matrix* x,
                                   softhg_matrix** x_out) {
  if (!block || !x || !x_out) return invalid_argument("block_forward: NULL argument");
  return guarded([&] {
    *x_out = new softhg_matrix{softhgnn_forward(x->m, block->params).x_out};
  });
}

softhg_status softhg_block_participation(const softhg_block* block,
                                         const softhg_matrix* x, softhg_matrix** a_out) {
  if (!block || !x || !a_out) return invalid_argument("block_participation: NULL argument");
  return guarded([&] {
    *a_out = new softhg_matrix{softhgnn_forward(x->m, block->params).cache.part.a};
  });
}

softhg_status softhg_block_save(const softhg_block* block, const char* path) {
  if (!block || !path) return invalid_argument("block_save: NULL argument");
  return guarded([&] { save_params(block->params, path); });
}

softhg_status softhg_block_load(const char* path, softhg_block** out) {
  if (!path || !out) return invalid_argument("block_load: NULL argument");
  return guarded([&] { *out = new softhg_block{load_params(path)}; });
}

void softhg_ses_config_init(softhg_ses_config* cfg) {
  if (!cfg) return;
  cfg->m_fixed = 16;
  cfg->m_dyn = 32;
  cfg->k = 16;
  cfg->window = 64;
}

softhg_status softhg_ses_create(const softhg_ses_config* cfg, softhg_ses** out) {
  if (!cfg || !out) return invalid_argument("ses_create: NULL argument");
  return guarded([&] {
    SeSConfig sc{cfg->m_fixed, cfg->m_dyn, cfg->k, cfg->window};
    *out = new softhg_ses{sc, SeSState(sc)};
  });
}

void softhg_ses_destroy(softhg_ses* ses) { delete ses; }

softhg_status softhg_ses_step(softhg_ses* ses, const softhg_matrix* scores,
                              softhg_matrix** a_total, double* lb_loss) {
  if (!ses || !scores) return invalid_argument("ses_step: NULL argument");
  return guarded([&] {
    const Matrix& s = scores->m;
    if (s.cols() != ses->cfg.total()) {
      throw ShapeError("ses_step: scores are " + s.shape_str() + ", split expects " +
                       std::to_string(ses->cfg.total()) + " columns");
    }
    Matrix s_fixed(s.rows(), ses->cfg.m_fixed);
    Matrix s_dyn(s.rows(), ses->cfg.m_dyn);
    for (size_t i = 0; i < s.rows(); ++i) {
      for (size_t j = 0; j < ses->cfg.m_fixed; ++j) s_fixed(i, j) = s(i, j);
      for (size_t j = 0; j < ses->cfg.m_dyn; ++j)
        s_dyn(i, j) = s(i, ses->cfg.m_fixed + j);
    }
    std::vector<size_t> sel = select_topk(activation_scores(s_dyn), ses->cfg.k);
    Participation part = build_participation_ses(s_fixed, s_dyn, sel);
    const double loss = ses->state.record_and_balance(sel);
    if (a_total) *a_total = new softhg_matrix{std::move(part.a)};
    if (lb_loss) *lb_loss = loss;
  });
}

softhg_status softhg_ses_dump(const softhg_ses* ses, char** json_out) {
  if (!ses || !json_out) return invalid_argument("ses_dump: NULL argument");
  return guarded([&] { *json_out = dup_string(ses->state.dump_json()); });
}

void softhg_ses_reset(softhg_ses* ses) {
  if (ses) ses->state.reset();
}

softhg_status softhg_run_gradcheck(const char* options_json, char** report_out,
                                   char** report_json_out, int* passed_out) {
  return guarded([&] {
    nlohmann::json j = parse_options(options_json);
    GradCheckConfig cfg;
    uint64_t seed = 7;
    if (j.contains("seed")) seed = j["seed"].get<uint64_t>();
    if (j.contains("n")) cfg.n = j["n"].get<size_t>();
    if (j.contains("d")) cfg.d = j["d"].get<size_t>();
    if (j.contains("m")) cfg.m = j["m"].get<size_t>();
    if (j.contains("heads")) cfg.heads = j["heads"].get<size_t>();
    if (j.contains("phi_hidden")) cfg.phi_hidden = j["phi_hidden"].get<size_t>();
    if (j.contains("activation"))
      cfg.activation = activation_from_string(j["activation"].get<std::string>());
    if (j.contains("step")) cfg.step = j["step"].get<double>();
    if (j.contains("tolerance")) cfg.tolerance = j["tolerance"].get<double>();
    GradReport report = check_block(cfg, seed);
    if (report_out) *report_out = dup_string(report.to_text());
    if (report_json_out) *report_json_out = dup_string(report.to_json());
    if (passed_out) *passed_out = report.passed ? 1 : 0;
  });
}

softhg_status softhg_run_oracle(uint64_t seed, size_t instances, char** report_out,
                                double* max_abs_dev_out) {
  return guarded([&] {
    OracleResult result = run_oracle_suite(seed, instances);
    if (report_out) *report_out = dup_string(result.summary());
    if (max_abs_dev_out) *max_abs_dev_out = result.worst();
  });
}

softhg_status softhg_run_bench(const char* options_json, const char* csv_path,
                               char** table_out) {
  return guarded([&] {
    nlohmann::json j = parse_options(options_json);
    BenchOptions opts;
    if (j.contains("ops")) opts.ops = j["ops"].get<std::vector<std::string>>();
    if (j.contains("n")) opts.n_list = j["n"].get<std::vector<size_t>>();
    if (j.contains("d")) opts.d = j["d"].get<size_t>();
    if (j.contains("m")) opts.m = j["m"].get<size_t>();
    if (j.contains("repeats")) opts.repeats = j["repeats"].get<size_t>();
    if (j.contains("seed")) opts.seed = j["seed"].get<uint64_t>();
    std::vector<BenchRow> rows = scaling_run(opts);
    if (csv_path && *csv_path) write_bench_csv(csv_path, rows);
    if (table_out) *table_out = dup_string(bench_table(rows));
    if (j.value("check_slopes", false)) check_slopes(rows);
  });
}

softhg_status softhg_run_train(const char* config_json, const char* csv_path,
                               char** summary_json_out) {
  return guarded([&] {
    TrainConfig cfg = train_config_from_json(config_json ? config_json : "");
    GroupDataset data = gen_group_dataset(cfg.data);
    TrainResult result = train_loop(cfg, data);
    if (csv_path && *csv_path) write_metrics_csv(csv_path, result);
    if (summary_json_out) {
      nlohmann::json s;
      s["model"] = to_string(cfg.model);
      s["epochs"] = cfg.epochs;
      s["final_train_accuracy"] = result.final_train_accuracy;
      s["final_eval_accuracy"] = result.final_eval_accuracy;
      if (result.ses_state) {
        s["l_lb"] = result.ses_state->lb_loss();
        s["passes_seen"] = result.ses_state->passes_seen();
      }
      *summary_json_out = dup_string(s.dump(2));
    }
  });
}

softhg_status softhg_run_ses_demo(const char* options_json, char** report_out) {
  return guarded([&] {
    nlohmann::json j = parse_options(options_json);
    SeSConfig cfg;
    size_t n = 32, d = 64;
    uint64_t seed = 1;
    size_t passes = 0;
    if (j.contains("fixed")) cfg.m_fixed = j["fixed"].get<size_t>();
    if (j.contains("dyn")) cfg.m_dyn = j["dyn"].get<size_t>();
    if (j.contains("topk")) cfg.k = j["topk"].get<size_t>();
    if (j.contains("window")) cfg.window = j["window"].get<size_t>();
    if (j.contains("n")) n = j["n"].get<size_t>();
    if (j.contains("d")) d = j["d"].get<size_t>();
    if (j.contains("seed")) seed = j["seed"].get<uint64_t>();
    if (j.contains("passes")) passes = j["passes"].get<size_t>();
    if (passes == 0) passes = cfg.window;
    cfg.validate();

    BlockConfig bc;
    bc.dim = d;
    bc.hyperedges = cfg.total();
    bc.heads = (d % 8 == 0) ? 8 : 1;
    Rng rng(seed);
    SoftHGParams params = init_params(bc, rng);
    SeSState state(cfg);

    std::ostringstream os;
    os << "ses demo: fixed=" << cfg.m_fixed << " dyn=" << cfg.m_dyn << " k=" << cfg.k
       << " window=" << cfg.window << " passes=" << passes << "\n";
    char buf[96];
    for (size_t t = 0; t < passes; ++t) {
      Matrix x(n, d);
      for (size_t i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
      BlockOutput out = softhgnn_forward_ses(x, params, cfg);
      const double lb = state.record_and_balance(out.cache.ses->selected);
      std::snprintf(buf, sizeof(buf), "pass %4zu  l_lb=%.6g\n", t + 1, lb);
      os << buf;
    }
    os << "p = [";
    auto p = state.activation_probabilities();
    for (size_t i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%s%.6g", i ? ", " : "", p[i]);
      os << buf;
    }
    double sum = 0.0;
    for (double v : p) sum += v;
    os << "]\n";
    std::snprintf(buf, sizeof(buf), "sum(p) = %.6g  (k = %zu)\n", sum, cfg.k);
    os << buf;
    std::snprintf(buf, sizeof(buf), "final l_lb = %.6g\n", state.lb_loss());
    os << buf;
    os << "state = " << state.dump_json() << "\n";
    if (report_out) *report_out = dup_string(os.str());
  });
}

}  // extern "C"
