// Copyright 2026 The softhg authors
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library strictly through the public C header, the way
// an external client would.
#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "softhg.h"

namespace {

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { softhg_string_free(s); }
};

std::string temp_path(const char* name) {
  return std::string("/tmp/softhg_capi_") + name;
}

}  // namespace

TEST_CASE("matrix create, inspect, read, destroy") {
  const double data[] = {1, 2, 3, 4, 5, 6};
  softhg_matrix* m = nullptr;
  REQUIRE(softhg_matrix_create(2, 3, data, &m) == SOFTHG_OK);
  CHECK(softhg_matrix_rows(m) == 2);
  CHECK(softhg_matrix_cols(m) == 3);
  double out[6] = {};
  REQUIRE(softhg_matrix_read(m, out, 6) == SOFTHG_OK);
  for (int i = 0; i < 6; ++i) CHECK(out[i] == data[i]);

  double small[2];
  CHECK(softhg_matrix_read(m, small, 2) == SOFTHG_ERR_SHAPE);
  CHECK(std::string(softhg_last_error()).find("2x3") != std::string::npos);
  softhg_matrix_destroy(m);
}

TEST_CASE("null arguments are argument errors") {
  CHECK(softhg_matrix_create(2, 2, nullptr, nullptr) == SOFTHG_ERR_ARGUMENT);
  CHECK(softhg_block_forward(nullptr, nullptr, nullptr) == SOFTHG_ERR_ARGUMENT);
  CHECK(softhg_ses_step(nullptr, nullptr, nullptr, nullptr) == SOFTHG_ERR_ARGUMENT);
}

TEST_CASE("block forward through the C surface") {
  softhg_block_config cfg;
  softhg_block_config_init(&cfg, 8);
  CHECK(cfg.hyperedges == 8);
  CHECK(cfg.heads == 8);
  cfg.heads = 2;
  cfg.hyperedges = 3;

  softhg_block* block = nullptr;
  REQUIRE(softhg_block_create(&cfg, 99, &block) == SOFTHG_OK);

  std::vector<double> xdata(5 * 8);
  for (size_t i = 0; i < xdata.size(); ++i) xdata[i] = 0.1 * static_cast<double>(i % 7) - 0.3;
  softhg_matrix* x = nullptr;
  REQUIRE(softhg_matrix_create(5, 8, xdata.data(), &x) == SOFTHG_OK);

  softhg_matrix* out = nullptr;
  REQUIRE(softhg_block_forward(block, x, &out) == SOFTHG_OK);
  CHECK(softhg_matrix_rows(out) == 5);
  CHECK(softhg_matrix_cols(out) == 8);

  softhg_matrix* a = nullptr;
  REQUIRE(softhg_block_participation(block, x, &a) == SOFTHG_OK);
  CHECK(softhg_matrix_rows(a) == 5);
  CHECK(softhg_matrix_cols(a) == 3);
  // E-Norm: each column sums to 1
  std::vector<double> avals(15);
  REQUIRE(softhg_matrix_read(a, avals.data(), avals.size()) == SOFTHG_OK);
  for (size_t j = 0; j < 3; ++j) {
    double sum = 0.0;
    for (size_t i = 0; i < 5; ++i) sum += avals[i * 3 + j];
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }

  // a wrong input width is a shape error with both shapes named
  softhg_matrix* bad = nullptr;
  REQUIRE(softhg_matrix_create(5, 4, nullptr, &bad) == SOFTHG_OK);
  softhg_matrix* unused = nullptr;
  CHECK(softhg_block_forward(block, bad, &unused) == SOFTHG_ERR_SHAPE);
  CHECK(std::string(softhg_last_error()).find("5x4") != std::string::npos);

  softhg_matrix_destroy(bad);
  softhg_matrix_destroy(a);
  softhg_matrix_destroy(out);
  softhg_matrix_destroy(x);
  softhg_block_destroy(block);
}

TEST_CASE("block save and load reproduce the same forward") {
  softhg_block_config cfg;
  softhg_block_config_init(&cfg, 4);
  cfg.heads = 2;
  softhg_block* block = nullptr;
  REQUIRE(softhg_block_create(&cfg, 5, &block) == SOFTHG_OK);

  const std::string path = temp_path("params.json");
  REQUIRE(softhg_block_save(block, path.c_str()) == SOFTHG_OK);
  softhg_block* loaded = nullptr;
  REQUIRE(softhg_block_load(path.c_str(), &loaded) == SOFTHG_OK);

  std::vector<double> xdata(3 * 4, 0.25);
  xdata[5] = -1.5;
  softhg_matrix* x = nullptr;
  REQUIRE(softhg_matrix_create(3, 4, xdata.data(), &x) == SOFTHG_OK);
  softhg_matrix* out_a = nullptr;
  softhg_matrix* out_b = nullptr;
  REQUIRE(softhg_block_forward(block, x, &out_a) == SOFTHG_OK);
  REQUIRE(softhg_block_forward(loaded, x, &out_b) == SOFTHG_OK);
  std::vector<double> va(12), vb(12);
  REQUIRE(softhg_matrix_read(out_a, va.data(), 12) == SOFTHG_OK);
  REQUIRE(softhg_matrix_read(out_b, vb.data(), 12) == SOFTHG_OK);
  CHECK(va == vb);

  CHECK(softhg_block_load("/nonexistent/params.json", &loaded) == SOFTHG_ERR_IO);

  std::remove(path.c_str());
  softhg_matrix_destroy(out_b);
  softhg_matrix_destroy(out_a);
  softhg_matrix_destroy(x);
  softhg_block_destroy(loaded);
  softhg_block_destroy(block);
}

TEST_CASE("ses stepping through the C surface") {
  softhg_ses_config cfg;
  softhg_ses_config_init(&cfg);
  CHECK(cfg.m_fixed == 16);
  CHECK(cfg.m_dyn == 32);
  CHECK(cfg.k == 16);
  cfg.m_fixed = 1;
  cfg.m_dyn = 3;
  cfg.k = 1;
  cfg.window = 4;

  softhg_ses* ses = nullptr;
  REQUIRE(softhg_ses_create(&cfg, &ses) == SOFTHG_OK);

  // dynamic column 2 has the largest column sum
  const double scores[] = {0.0, 1.0, 0.0, 5.0,
                           0.0, 0.0, 1.0, 5.0};
  softhg_matrix* s = nullptr;
  REQUIRE(softhg_matrix_create(2, 4, scores, &s) == SOFTHG_OK);

  softhg_matrix* a_total = nullptr;
  double lb = -1.0;
  REQUIRE(softhg_ses_step(ses, s, &a_total, &lb) == SOFTHG_OK);
  CHECK(softhg_matrix_cols(a_total) == 2);  // 1 fixed + k=1
  CHECK(lb >= 0.0);

  StringGuard dump;
  REQUIRE(softhg_ses_dump(ses, &dump.s) == SOFTHG_OK);
  CHECK(std::string(dump.s).find("\"passes_seen\":1") != std::string::npos);

  softhg_ses_reset(ses);
  StringGuard dump2;
  REQUIRE(softhg_ses_dump(ses, &dump2.s) == SOFTHG_OK);
  CHECK(std::string(dump2.s).find("\"passes_seen\":0") != std::string::npos);

  // wrong column count
  softhg_matrix* bad = nullptr;
  REQUIRE(softhg_matrix_create(2, 3, nullptr, &bad) == SOFTHG_OK);
  CHECK(softhg_ses_step(ses, bad, nullptr, nullptr) == SOFTHG_ERR_SHAPE);

  // invalid split
  softhg_ses_config bad_cfg{2, 2, 3, 4};
  softhg_ses* unused = nullptr;
  CHECK(softhg_ses_create(&bad_cfg, &unused) == SOFTHG_ERR_CONFIG);

  softhg_matrix_destroy(bad);
  softhg_matrix_destroy(a_total);
  softhg_matrix_destroy(s);
  softhg_ses_destroy(ses);
}

TEST_CASE("gradcheck run") {
  StringGuard text, json;
  int passed = 0;
  REQUIRE(softhg_run_gradcheck(R"({"seed":7,"n":4,"d":4,"m":2,"heads":2})", &text.s,
                               &json.s, &passed) == SOFTHG_OK);
  CHECK(passed == 1);
  CHECK(std::string(text.s).find("result: PASS") != std::string::npos);
  CHECK(std::string(json.s).find("\"passed\": true") != std::string::npos);

  CHECK(softhg_run_gradcheck("{not json", nullptr, nullptr, nullptr) == SOFTHG_ERR_IO);
}

TEST_CASE("oracle run") {
  StringGuard text;
  double worst = 1.0;
  REQUIRE(softhg_run_oracle(3, 25, &text.s, &worst) == SOFTHG_OK);
  CHECK(worst < 1e-10);
  CHECK(std::string(text.s).find("25 instances") != std::string::npos);
}

TEST_CASE("bench run writes the CSV") {
  const std::string path = temp_path("bench.csv");
  StringGuard table;
  REQUIRE(softhg_run_bench(R"({"ops":["softhgnn"],"n":[32,64],"d":8,"m":2,"repeats":5})",
                           path.c_str(), &table.s) == SOFTHG_OK);
  FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char header[64] = {};
  REQUIRE(std::fgets(header, sizeof(header), f) != nullptr);
  std::fclose(f);
  CHECK(std::string(header) == "op,n,d,m,repeats,median_seconds,workspace_bytes\n");
  std::remove(path.c_str());

  CHECK(softhg_run_bench(R"({"ops":["bogus"],"n":[32,64]})", nullptr, nullptr) ==
        SOFTHG_ERR_CONFIG);
}

TEST_CASE("train run returns a summary") {
  const char* cfg = R"({
    "model": "softhgnn",
    "epochs": 2,
    "data": {"n_samples": 200, "tokens": 9, "dim": 8},
    "block": {"heads": 2}
  })";
  StringGuard summary;
  REQUIRE(softhg_run_train(cfg, nullptr, &summary.s) == SOFTHG_OK);
  const std::string text(summary.s);
  CHECK(text.find("final_eval_accuracy") != std::string::npos);
  CHECK(text.find("\"model\": \"softhgnn\"") != std::string::npos);
}

TEST_CASE("ses demo run reports probabilities") {
  StringGuard text;
  REQUIRE(softhg_run_ses_demo(R"({"fixed":2,"dyn":4,"topk":2,"window":8,"n":6,"d":8})",
                              &text.s) == SOFTHG_OK);
  const std::string report(text.s);
  CHECK(report.find("p = [") != std::string::npos);
  CHECK(report.find("l_lb") != std::string::npos);
}

TEST_CASE("status names") {
  CHECK(std::string(softhg_status_name(SOFTHG_OK)) == "ok");
  CHECK(std::string(softhg_status_name(SOFTHG_ERR_SHAPE)) == "shape_error");
  CHECK(std::string(softhg_status_name(SOFTHG_ERR_NUMERIC)) == "numeric_error");
}
