// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
//
// softhg: command-line front end over the softhg shared library.
// Exit codes: 0 success, 1 numeric/check failure, 2 usage or config error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "softhg.h"

namespace {

struct FreeString {
  void operator()(char* s) const { softhg_string_free(s); }
};
using OwnedString = std::unique_ptr<char, FreeString>;

int fail(const std::string& reason, int code) {
  std::cerr << "softhg: error: " << reason << "\n";
  return code;
}

int code_for(softhg_status status) {
  return status == SOFTHG_ERR_NUMERIC ? 1 : 2;
}

int fail_status(softhg_status status) {
  return fail(std::string(softhg_status_name(status)) + ": " + softhg_last_error(),
              code_for(status));
}

// "256..8192" doubles from lo to hi; otherwise a comma list
std::vector<size_t> parse_n_list(const std::string& text) {
  std::vector<size_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const size_t lo = std::stoull(text.substr(0, dots));
    const size_t hi = std::stoull(text.substr(dots + 2));
    if (lo == 0 || hi < lo) throw CLI::ValidationError("--n", "bad range '" + text + "'");
    for (size_t n = lo; n <= hi; n *= 2) out.push_back(n);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

std::vector<std::string> parse_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// output paths are probed before any work starts
void require_writable(const std::string& path, const char* flag) {
  if (path.empty()) return;
  std::ofstream probe(path, std::ios::app);
  if (!probe) throw CLI::ValidationError(flag, "cannot open '" + path + "' for writing");
}

void print_options(bool verbose, const nlohmann::json& opts) {
  if (verbose) std::cerr << "softhg: options: " << opts.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft hypergraph neural network toolkit"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "echo the effective options before running");

  // ---- gradcheck ----
  auto* gradcheck = app.add_subcommand(
      "gradcheck", "verify analytic gradients against central finite differences");
  uint64_t gc_seed = 7;
  size_t gc_n = 5, gc_d = 4, gc_m = 3, gc_heads = 2, gc_phi_hidden = 0;
  double gc_step = 1e-5, gc_tol = 1e-4;
  std::string gc_activation = "relu", gc_out;
  gradcheck->add_option("--seed", gc_seed, "random seed");
  gradcheck->add_option("--n", gc_n, "vertices");
  gradcheck->add_option("--d", gc_d, "feature dimension");
  gradcheck->add_option("--hyperedges,--m", gc_m, "soft hyperedges");
  gradcheck->add_option("--heads", gc_heads, "similarity heads");
  gradcheck->add_option("--phi-hidden", gc_phi_hidden, "offset-network hidden width");
  gradcheck->add_option("--activation", gc_activation, "relu|gelu|identity");
  gradcheck->add_option("--step", gc_step, "finite-difference step");
  gradcheck->add_option("--tol", gc_tol, "relative tolerance");
  gradcheck->add_option("--out", gc_out, "write the JSON report here");

  // ---- oracle ----
  auto* oracle = app.add_subcommand(
      "oracle", "loop-form vs matrix-form message passing equivalence suite");
  uint64_t or_seed = 1;
  size_t or_instances = 100;
  double or_tol = 1e-10;
  oracle->add_option("--seed", or_seed, "random seed");
  oracle->add_option("--instances", or_instances, "random instances");
  oracle->add_option("--tol", or_tol, "max allowed absolute deviation");

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "scaling benchmark (CSV output)");
  std::string be_ops = "softhgnn,attention,hgnn_knn";
  std::string be_n = "256..8192";
  size_t be_d = 64, be_m = 8, be_repeats = 5;
  uint64_t be_seed = 1;
  std::string be_out;
  bool be_check = false;
  bench->add_option("--ops", be_ops, "comma list: softhgnn,attention,hgnn_knn");
  bench->add_option("--n", be_n, "token counts, e.g. 256..8192 or 256,512");
  bench->add_option("--d", be_d, "feature dimension");
  bench->add_option("--hyperedges,--m", be_m, "soft hyperedges");
  bench->add_option("--repeats", be_repeats, "timed repeats (>= 5)");
  bench->add_option("--seed", be_seed, "random seed");
  bench->add_option("--out", be_out, "CSV output path");
  bench->add_flag("--check-slopes", be_check,
                  "fail unless log-log slopes sit in the expected bands");

  // ---- train ----
  auto* train = app.add_subcommand("train", "train one arm of the synthetic task");
  std::string tr_config, tr_out, tr_model, tr_norm;
  uint64_t tr_seed = 0;
  size_t tr_epochs = 0, tr_heads = 0, tr_hyperedges = 0;
  size_t tr_fixed = 0, tr_dyn = 0, tr_topk = 0;
  double tr_lr = -1.0;
  train->add_option("--config", tr_config, "train config JSON file");
  train->add_option("--out", tr_out, "metrics CSV path");
  train->add_option("--model", tr_model, "pool|softhgnn|softhgnn_ses");
  train->add_option("--seed", tr_seed, "random seed");
  train->add_option("--epochs", tr_epochs, "training epochs");
  train->add_option("--lr", tr_lr, "learning rate");
  train->add_option("--norm", tr_norm, "enorm|vnorm|none");
  train->add_option("--heads", tr_heads, "similarity heads");
  train->add_option("--hyperedges", tr_hyperedges, "soft hyperedges");
  train->add_option("--fixed", tr_fixed, "fixed hyperedges (ses)");
  train->add_option("--dyn", tr_dyn, "dynamic hyperedges (ses)");
  train->add_option("--topk", tr_topk, "selected dynamic hyperedges (ses)");
  std::string tr_save_params, tr_load_params;
  train->add_option("--save-params", tr_save_params, "write the trained block parameters (JSON)");
  train->add_option("--load-params", tr_load_params, "initialize the block from saved parameters");

  // ---- ses-demo ----
  auto* demo = app.add_subcommand(
      "ses-demo", "run sparse hyperedge selection and print p_j and the loss trajectory");
  size_t de_fixed = 16, de_dyn = 32, de_topk = 16, de_window = 64, de_n = 32, de_d = 64,
         de_passes = 0;
  uint64_t de_seed = 1;
  demo->add_option("--fixed", de_fixed, "fixed hyperedges");
  demo->add_option("--dyn", de_dyn, "dynamic hyperedges");
  demo->add_option("--topk", de_topk, "selected dynamic hyperedges");
  demo->add_option("--window", de_window, "tracked forward passes");
  demo->add_option("--n", de_n, "vertices per pass");
  demo->add_option("--d", de_d, "feature dimension");
  demo->add_option("--seed", de_seed, "random seed");
  demo->add_option("--passes", de_passes, "forward passes (default: window)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "softhg: error: " << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    if (gradcheck->parsed()) {
      nlohmann::json opts;
      opts["seed"] = gc_seed;
      opts["n"] = gc_n;
      opts["d"] = gc_d;
      opts["m"] = gc_m;
      opts["heads"] = gc_heads;
      opts["phi_hidden"] = gc_phi_hidden;
      opts["activation"] = gc_activation;
      opts["step"] = gc_step;
      opts["tolerance"] = gc_tol;
      require_writable(gc_out, "--out");
      print_options(verbose, opts);
      char* text = nullptr;
      char* json = nullptr;
      int passed = 0;
      softhg_status st =
          softhg_run_gradcheck(opts.dump().c_str(), &text, &json, &passed);
      if (st != SOFTHG_OK) return fail_status(st);
      OwnedString text_owner(text), json_owner(json);
      std::cout << text;
      if (!gc_out.empty()) {
        std::ofstream out(gc_out);
        if (!out) return fail("cannot open '" + gc_out + "' for writing", 2);
        out << json << "\n";
      }
      if (!passed) return fail("gradcheck failed: see report above", 1);
      return 0;
    }

    if (oracle->parsed()) {
      print_options(verbose, {{"seed", or_seed}, {"instances", or_instances}});
      char* text = nullptr;
      double worst = 0.0;
      softhg_status st = softhg_run_oracle(or_seed, or_instances, &text, &worst);
      if (st != SOFTHG_OK) return fail_status(st);
      OwnedString owner(text);
      std::cout << text;
      if (worst > or_tol) {
        char line[128];
        std::snprintf(line, sizeof(line), "oracle deviation %.3e exceeds %.3e", worst,
                      or_tol);
        return fail(line, 1);
      }
      return 0;
    }

    if (bench->parsed()) {
      nlohmann::json opts;
      opts["ops"] = parse_list(be_ops);
      opts["n"] = parse_n_list(be_n);
      opts["d"] = be_d;
      opts["m"] = be_m;
      opts["repeats"] = be_repeats;
      opts["seed"] = be_seed;
      opts["check_slopes"] = be_check;
      require_writable(be_out, "--out");
      print_options(verbose, opts);
      char* table = nullptr;
      softhg_status st = softhg_run_bench(opts.dump().c_str(),
                                          be_out.empty() ? nullptr : be_out.c_str(),
                                          &table);
      if (table) {
        OwnedString owner(table);
        std::cout << table;
      }
      if (st != SOFTHG_OK) return fail_status(st);
      return 0;
    }

    if (train->parsed()) {
      nlohmann::json cfg = nlohmann::json::object();
      if (!tr_config.empty()) cfg = nlohmann::json::parse(read_file(tr_config));
      if (train->count("--model")) cfg["model"] = tr_model;
      if (train->count("--seed")) cfg["seed"] = tr_seed;
      if (train->count("--epochs")) cfg["epochs"] = tr_epochs;
      if (train->count("--lr")) cfg["lr"] = tr_lr;
      if (train->count("--norm")) cfg["block"]["norm"] = tr_norm;
      if (train->count("--heads")) cfg["block"]["heads"] = tr_heads;
      if (train->count("--hyperedges")) cfg["block"]["hyperedges"] = tr_hyperedges;
      if (train->count("--fixed")) cfg["ses"]["fixed"] = tr_fixed;
      if (train->count("--dyn")) cfg["ses"]["dyn"] = tr_dyn;
      if (train->count("--topk")) cfg["ses"]["topk"] = tr_topk;
      if (!tr_load_params.empty()) cfg["params_in"] = tr_load_params;
      if (!tr_save_params.empty()) cfg["params_out"] = tr_save_params;
      require_writable(tr_out, "--out");
      require_writable(tr_save_params, "--save-params");
      print_options(verbose, cfg);
      char* summary = nullptr;
      softhg_status st = softhg_run_train(cfg.dump().c_str(),
                                          tr_out.empty() ? nullptr : tr_out.c_str(),
                                          &summary);
      if (st != SOFTHG_OK) return fail_status(st);
      OwnedString owner(summary);
      std::cout << summary << "\n";
      return 0;
    }

    if (demo->parsed()) {
      nlohmann::json opts;
      opts["fixed"] = de_fixed;
      opts["dyn"] = de_dyn;
      opts["topk"] = de_topk;
      opts["window"] = de_window;
      opts["n"] = de_n;
      opts["d"] = de_d;
      opts["seed"] = de_seed;
      if (de_passes > 0) opts["passes"] = de_passes;
      print_options(verbose, opts);
      char* text = nullptr;
      softhg_status st = softhg_run_ses_demo(opts.dump().c_str(), &text);
      if (st != SOFTHG_OK) return fail_status(st);
      OwnedString owner(text);
      std::cout << text;
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    return fail(e.what(), 2);
  } catch (const nlohmann::json::exception& e) {
    return fail(std::string("config JSON: ") + e.what(), 2);
  } catch (const std::exception& e) {
    return fail(e.what(), 2);
  }
  return fail("no subcommand given", 2);
}
