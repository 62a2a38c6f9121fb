/* Copyright 2026 The softhg authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the softhg shared library: soft hypergraph neural network
 * blocks (dynamic soft hyperedges, vertex<->hyperedge message passing, sparse
 * hyperedge selection with load balancing), classical-hypergraph and
 * self-attention baselines, gradient verification, a synthetic training task
 * and a scaling benchmark.
 *
 * All functions return SOFTHG_OK or an error code; softhg_last_error() gives
 * a thread-local message for the most recent failure. Objects are opaque
 * handles released with their _destroy function. Strings returned through
 * char** are owned by the caller and released with softhg_string_free.
 */
#ifndef SOFTHG_H
#define SOFTHG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum softhg_status {
  SOFTHG_OK = 0,
  SOFTHG_ERR_SHAPE = 1,
  SOFTHG_ERR_CONFIG = 2,
  SOFTHG_ERR_NUMERIC = 3,
  SOFTHG_ERR_IO = 4,
  SOFTHG_ERR_ARGUMENT = 5
} softhg_status;

const char* softhg_last_error(void);
const char* softhg_status_name(softhg_status status);
void softhg_string_free(char* s);

/* ---- dense row-major double matrices ---- */

typedef struct softhg_matrix softhg_matrix;

/* data may be NULL for a zero matrix; otherwise rows*cols doubles */
softhg_status softhg_matrix_create(size_t rows, size_t cols, const double* data,
                                   softhg_matrix** out);
void softhg_matrix_destroy(softhg_matrix* m);
size_t softhg_matrix_rows(const softhg_matrix* m);
size_t softhg_matrix_cols(const softhg_matrix* m);
/* copies rows*cols values into buffer; buffer_len must be large enough */
softhg_status softhg_matrix_read(const softhg_matrix* m, double* buffer,
                                 size_t buffer_len);

/* ---- SoftHGNN block ---- */

enum { SOFTHG_NORM_ENORM = 0, SOFTHG_NORM_VNORM = 1, SOFTHG_NORM_NONE = 2 };
enum { SOFTHG_ACT_RELU = 0, SOFTHG_ACT_GELU = 1, SOFTHG_ACT_IDENTITY = 2 };

typedef struct softhg_block_config {
  size_t dim;        /* vertex feature dimension D */
  size_t hyperedges; /* M */
  size_t heads;      /* must divide dim */
  size_t phi_hidden; /* 0: single affine offset network */
  int norm;          /* SOFTHG_NORM_* */
  int activation;    /* SOFTHG_ACT_* */
  int residual;      /* nonzero: add the input to the output */
} softhg_block_config;

/* defaults: 8 hyperedges, 8 heads, E-Norm, relu, residual on */
void softhg_block_config_init(softhg_block_config* cfg, size_t dim);

typedef struct softhg_block softhg_block;

softhg_status softhg_block_create(const softhg_block_config* cfg, uint64_t seed,
                                  softhg_block** out);
void softhg_block_destroy(softhg_block* block);
/* x is N×dim; writes the N×dim block output */
softhg_status softhg_block_forward(const softhg_block* block, const softhg_matrix* x,
                                   softhg_matrix** x_out);
/* the continuous participation matrix A (N×hyperedges) for x */
softhg_status softhg_block_participation(const softhg_block* block,
                                         const softhg_matrix* x, softhg_matrix** a_out);
/* flat JSON: tensor name -> {shape, row-major data}, plus hyperparameters */
softhg_status softhg_block_save(const softhg_block* block, const char* path);
softhg_status softhg_block_load(const char* path, softhg_block** out);

/* ---- sparse hyperedge selection ---- */

typedef struct softhg_ses_config {
  size_t m_fixed; /* always-active hyperedges */
  size_t m_dyn;   /* dynamic candidates */
  size_t k;       /* selected per pass, 1 <= k <= m_dyn */
  size_t window;  /* forward passes tracked for activation probabilities */
} softhg_ses_config;

/* defaults: 16 fixed, 32 dynamic, k = 16 (50% sparsity), window 64 */
void softhg_ses_config_init(softhg_ses_config* cfg);

typedef struct softhg_ses softhg_ses;

softhg_status softhg_ses_create(const softhg_ses_config* cfg, softhg_ses** out);
void softhg_ses_destroy(softhg_ses* ses);
/* One pass: scores is the raw N×(m_fixed+m_dyn) score matrix. Selects the
 * top-k dynamic columns, returns the participation over the m_fixed+k active
 * columns (each column sums to 1), records the selection and returns the
 * load-balancing loss. a_total and lb_loss may be NULL. */
softhg_status softhg_ses_step(softhg_ses* ses, const softhg_matrix* scores,
                              softhg_matrix** a_total, double* lb_loss);
/* {"p":[...],"passes_seen":n,"window":T} */
softhg_status softhg_ses_dump(const softhg_ses* ses, char** json_out);
void softhg_ses_reset(softhg_ses* ses);

/* ---- whole-program runs (the CLI subcommands) ---- */

/* options/config arguments take a JSON object; NULL or "" keeps defaults */

/* finite-difference verification of the analytic gradients; passed_out gets
 * 0/1; report is the aligned text table, report_json optional */
softhg_status softhg_run_gradcheck(const char* options_json, char** report_out,
                                   char** report_json_out, int* passed_out);

/* loop-form vs matrix-form message-passing equivalence suite */
softhg_status softhg_run_oracle(uint64_t seed, size_t instances, char** report_out,
                                double* max_abs_dev_out);

/* scaling benchmark; writes the CSV when csv_path is non-NULL and returns the
 * human-readable table */
softhg_status softhg_run_bench(const char* options_json, const char* csv_path,
                               char** table_out);

/* trains one arm of the synthetic task; writes per-epoch metrics CSV when
 * csv_path is non-NULL; summary JSON holds the final accuracies */
softhg_status softhg_run_train(const char* config_json, const char* csv_path,
                               char** summary_json_out);

/* runs sparse selection for `window` passes on random inputs and reports the
 * activation probabilities and the load-balance trajectory */
softhg_status softhg_run_ses_demo(const char* options_json, char** report_out);

#ifdef __cplusplus
}
#endif

#endif /* SOFTHG_H */
