// Copyright 2026 The brl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the brl library.
 *
 * Every object is an opaque handle released by its *_free function. Calls
 * return a brl_status; on failure brl_last_error() describes the problem in
 * a single line (thread-local, valid until the next failing call on the same
 * thread). Output handles are only written on success.
 */
#ifndef BRL_BRL_H_
#define BRL_BRL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(BRL_BUILDING_LIBRARY)
#define BRL_API __attribute__((visibility("default")))
#else
#define BRL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum brl_status {
  BRL_OK = 0,
  BRL_E_PARAMETER = 1,
  BRL_E_CAPACITY = 2,
  BRL_E_PARSE = 3,
  BRL_E_IO = 4,
  BRL_E_INTERNAL = 5
} brl_status;

typedef struct brl_prior brl_prior;
typedef struct brl_model brl_model;
typedef struct brl_policy brl_policy;
typedef struct brl_table brl_table;

BRL_API const char* brl_version(void);
BRL_API const char* brl_last_error(void);
BRL_API const char* brl_status_name(brl_status status);

/* Priors ---------------------------------------------------------------- */

BRL_API brl_status brl_prior_load(const char* path, brl_prior** out);
BRL_API brl_status brl_prior_save(const brl_prior* prior, const char* path);
BRL_API void brl_prior_free(brl_prior* prior);

BRL_API size_t brl_prior_size(const brl_prior* prior);
BRL_API size_t brl_prior_n_states(const brl_prior* prior);
BRL_API size_t brl_prior_n_actions(const brl_prior* prior);
BRL_API size_t brl_prior_horizon(const brl_prior* prior);
BRL_API double brl_prior_weight(const brl_prior* prior, size_t member);
BRL_API size_t brl_prior_label(const brl_prior* prior, size_t member);

typedef struct brl_random_spec {
  size_t n_states;
  size_t n_actions;
  const double* cost_values; /* strictly increasing */
  size_t n_costs;
  double c_max;
  size_t horizon;
  size_t members;
  size_t support; /* next states per row, 0 = all */
  double concentration;
} brl_random_spec;

BRL_API brl_status brl_prior_random(const brl_random_spec* spec,
                                    uint64_t seed, brl_prior** out);
/* f has 2^horizon entries in {0, 1}. */
BRL_API brl_status brl_prior_lower_bound(size_t horizon, double eps_prime,
                                         const uint8_t* f, size_t member_cap,
                                         brl_prior** out);
/* Uses member 0 of `base` as the base MDP. */
BRL_API brl_status brl_prior_restricted(const brl_prior* base, size_t k,
                                        size_t variants, uint64_t seed,
                                        brl_prior** out);
BRL_API brl_status brl_prior_smooth(const brl_prior* prior, double alpha,
                                    brl_prior** out);
BRL_API brl_status brl_prior_sample(const brl_prior* prior, size_t n,
                                    uint64_t seed, brl_prior** out);
BRL_API brl_status brl_prior_q_ratio(const brl_prior* prior, double* out);

/* Bayes-adaptive models and policies ------------------------------------ */

/* node_cap = 0 selects the default cap. */
BRL_API brl_status brl_model_build(const brl_prior* prior, size_t horizon,
                                   size_t node_cap, brl_model** out);
BRL_API void brl_model_free(brl_model* model);
BRL_API size_t brl_model_node_count(const brl_model* model);
BRL_API size_t brl_model_n_actions(const brl_model* model);

/* Writes the history tree, one node per line, with visitation masses under
 * `policy` (uniform when NULL). */
BRL_API brl_status brl_model_dump(const brl_model* model,
                                  const brl_policy* policy, const char* path);

BRL_API brl_status brl_model_solve(const brl_model* model, double lambda,
                                   brl_policy** policy, double* loss);
BRL_API brl_status brl_model_evaluate(const brl_model* model,
                                      const brl_policy* policy, double lambda,
                                      double* loss);
/* Unregularized loss of `policy` minus the Bayes-optimal loss. */
BRL_API brl_status brl_model_regret(const brl_model* model,
                                    const brl_policy* policy, double* out);
/* CSV keyed by node index: node,t,state,value,p_0..p_{A-1}. */
BRL_API brl_status brl_model_write_policy(const brl_model* model,
                                          const brl_policy* policy,
                                          double lambda, const char* path);

BRL_API brl_status brl_policy_uniform(const brl_model* model,
                                      brl_policy** out);
BRL_API brl_status brl_policy_transfer(const brl_model* src,
                                       const brl_policy* policy,
                                       const brl_model* dst, brl_policy** out);
BRL_API brl_status brl_policy_row(const brl_policy* policy, size_t node,
                                  double* probs, size_t n_actions);
BRL_API void brl_policy_free(brl_policy* policy);

/* Tables ---------------------------------------------------------------- */

BRL_API size_t brl_table_rows(const brl_table* table);
BRL_API size_t brl_table_cols(const brl_table* table);
BRL_API const char* brl_table_column(const brl_table* table, size_t col);
/* Integer cells are converted; string cells are a parameter error. */
BRL_API brl_status brl_table_get(const brl_table* table, size_t row,
                                 size_t col, double* out);
BRL_API brl_status brl_table_write(const brl_table* table, const char* path,
                                   int jsonl);
BRL_API void brl_table_free(brl_table* table);

/* Experiment runners ---------------------------------------------------- *
 * Each runner fills `all_pass` with 1 iff every asserted check held.       */

/* Columns lambda,node_count,loss,root_value. */
BRL_API brl_status brl_run_solve(const brl_model* model, double lambda,
                                 brl_table** out);

/* ERM on `sample`, regret on `truth`. */
BRL_API brl_status brl_run_erm(const brl_prior* sample, const brl_prior* truth,
                               size_t horizon, double lambda, size_t node_cap,
                               brl_table** out);

/* One row per (lambda, j). */
BRL_API brl_status brl_run_stability(const brl_prior* sample, size_t horizon,
                                     const double* lambdas, size_t n_lambdas,
                                     size_t node_cap, size_t workers,
                                     brl_table** out, int* all_pass);

typedef struct brl_convergence_spec {
  size_t horizon;
  double lambda;
  size_t iterations;
  size_t fundamental_k; /* steps checked by the fundamental inequality */
  size_t references;    /* random reference policies besides pi* */
  size_t growth_draws;  /* random pi_0 for the quadratic-growth check */
  uint64_t seed;
  size_t node_cap;
} brl_convergence_spec;

/* `trace`: k,alpha,loss,min_fundamental_residual,rate_ratio.
 * `report`: check,value,bound,pass. */
BRL_API brl_status brl_run_convergence(const brl_prior* prior,
                                       const brl_convergence_spec* spec,
                                       brl_table** trace, brl_table** report,
                                       int* all_pass);

typedef struct brl_sweep_spec {
  const size_t* n_list;
  size_t n_count;
  const double* lambda_list;
  size_t lambda_count;
  size_t seeds;
  size_t horizon;
  double delta_conf;
  uint64_t seed;
  size_t workers; /* 0 = available parallelism */
  size_t node_cap;
  int stability;
} brl_sweep_spec;

BRL_API brl_status brl_run_sweep(const brl_prior* truth,
                                 const brl_sweep_spec* spec, brl_table** out,
                                 int* all_pass);

typedef struct brl_lowerbound_spec {
  size_t horizon;
  double eps_prime;
  size_t n;
  size_t runs;
  uint64_t seed;
  double lambda;     /* for the comparison bound columns */
  double delta_conf;
  size_t member_cap;
  size_t workers;
} brl_lowerbound_spec;

/* One row per run; all_pass iff at least 95% of runs exceed the expression. */
BRL_API brl_status brl_run_lowerbound(const brl_lowerbound_spec* spec,
                                      brl_table** out, int* all_pass);

typedef struct brl_bound_spec {
  double d_const;
  double c_max;
  double horizon;
  double n_actions;
  double lambda;
  double n_samples;
  double delta_conf;
  double p_min;
  double beta;
  double history_count;
} brl_bound_spec;

/* Columns bound,value. B is taken as c_max * horizon. */
BRL_API brl_status brl_run_bounds(const brl_bound_spec* spec, brl_table** out);

#ifdef __cplusplus
}
#endif

#endif /* BRL_BRL_H_ */
