/* C interface to the aoimec library. */
#ifndef AOIMEC_H
#define AOIMEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef AOIMEC_BUILDING
#    define AOIMEC_API __declspec(dllexport)
#  else
#    define AOIMEC_API __declspec(dllimport)
#  endif
#else
#  define AOIMEC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum aoimec_status {
  AOIMEC_OK = 0,
  AOIMEC_ERR_INVALID_ARGUMENT = 1,
  AOIMEC_ERR_DOMAIN = 2,
  AOIMEC_ERR_INSTABILITY = 3,
  AOIMEC_ERR_SINGULARITY = 4,
  AOIMEC_ERR_INFEASIBLE = 5,
  AOIMEC_ERR_CONFIG = 6,
  AOIMEC_ERR_INSUFFICIENT_SAMPLES = 7,
  AOIMEC_ERR_IO = 8,
  AOIMEC_ERR_INTERNAL = 9
} aoimec_status;

typedef enum aoimec_split_mode {
  AOIMEC_SPLIT_REPLICATE = 0,
  AOIMEC_SPLIT_THIN = 1
} aoimec_split_mode;

typedef enum aoimec_opt_mode {
  AOIMEC_OPT_JOINT = 0,
  AOIMEC_OPT_BETA_GIVEN_XI = 1,
  AOIMEC_OPT_XI_GIVEN_BETA = 2
} aoimec_opt_mode;

typedef struct aoimec_radio {
  double tau_linear;
  double alpha;
  double epsilon;
  double lambda_b;
} aoimec_radio;

typedef struct aoimec_task {
  double mean_size_bits;
  double cycles_per_bit;
  double tgr;
  double cor;
} aoimec_task;

typedef struct aoimec_platform {
  double ue_cpu_hz;
  double bs_cpu_hz;
  int ues_per_bs;
  double total_bandwidth_hz;
} aoimec_platform;

/* A rate is 0 when its queue carries no traffic (pure schemes). */
typedef struct aoimec_rates {
  double mu_l;
  double mu_t;
  double mu_e;
} aoimec_rates;

typedef struct aoimec_maoi {
  double maoi;
  double xi_terms[5]; /* zero unless partial */
  double p_local_dominates;
  double p_remote_dominates;
} aoimec_maoi;

typedef struct aoimec_optimum {
  double beta_star;
  double xi_star;
  double maoi_star;
  size_t evaluations;
  double feasible_fraction;
  int boundary_flag;
} aoimec_optimum;

/* Absent times are NaN. */
typedef struct aoimec_task_record {
  double gen_time;
  double local_done;
  double edge_done;
  double complete_time;
  double system_time_max;
  double interarrival;
} aoimec_task_record;

typedef struct aoimec_sim_result aoimec_sim_result;
typedef struct aoimec_experiment aoimec_experiment;

AOIMEC_API const char* aoimec_version(void);
AOIMEC_API const char* aoimec_status_string(aoimec_status s);
/* Message of the last failed call on this thread, "" if none. */
AOIMEC_API const char* aoimec_last_error(void);

/* Baseline parameter values. */
AOIMEC_API void aoimec_radio_defaults(aoimec_radio* r);
AOIMEC_API void aoimec_task_defaults(aoimec_task* t);
AOIMEC_API void aoimec_platform_defaults(aoimec_platform* p);

AOIMEC_API aoimec_status aoimec_stp_closed_form(const aoimec_radio* r, double* theta,
                                                double* sigma, int* valid);
AOIMEC_API aoimec_status aoimec_stp_monte_carlo(const aoimec_radio* r, size_t iterations,
                                                double window_radius_factor, uint64_t seed,
                                                double* theta_hat, double* ci_halfwidth);

AOIMEC_API aoimec_status aoimec_service_rates(const aoimec_task* t, const aoimec_platform* p,
                                              double tau_linear, double theta,
                                              aoimec_rates* out);

AOIMEC_API aoimec_status aoimec_maoi_local(double mu_l, double xi, double* maoi);
AOIMEC_API aoimec_status aoimec_maoi_remote(double mu_t, double mu_e, double xi,
                                            double* maoi);
/* literal_form != 0 selects the as-published first two terms. */
AOIMEC_API aoimec_status aoimec_maoi_partial(const aoimec_rates* r, double xi, double beta,
                                             int literal_form, aoimec_maoi* out);

/* `fixed` is xi for AOIMEC_OPT_BETA_GIVEN_XI and beta for AOIMEC_OPT_XI_GIVEN_BETA. */
AOIMEC_API aoimec_status aoimec_optimize(const aoimec_task* t, const aoimec_platform* p,
                                         double tau_linear, double theta,
                                         aoimec_opt_mode mode, double fixed,
                                         aoimec_optimum* out);

AOIMEC_API aoimec_status aoimec_simulate(const aoimec_rates* r, double xi, double beta,
                                         aoimec_split_mode mode, size_t n_tasks,
                                         double warmup_fraction, uint64_t seed,
                                         aoimec_sim_result** out);
AOIMEC_API aoimec_status aoimec_sim_result_maoi(const aoimec_sim_result* s, double* maoi,
                                                double* stderr_out);
AOIMEC_API size_t aoimec_sim_result_task_count(const aoimec_sim_result* s);
AOIMEC_API aoimec_status aoimec_sim_result_task(const aoimec_sim_result* s, size_t i,
                                                aoimec_task_record* out);
AOIMEC_API aoimec_status aoimec_sim_result_write_trace(const aoimec_sim_result* s,
                                                       const char* path);
AOIMEC_API void aoimec_sim_result_free(aoimec_sim_result* s);

AOIMEC_API aoimec_status aoimec_experiment_defaults(aoimec_experiment** out);
AOIMEC_API aoimec_status aoimec_experiment_load(const char* path, aoimec_experiment** out);
AOIMEC_API aoimec_status aoimec_experiment_load_string(const char* yaml,
                                                       aoimec_experiment** out);
AOIMEC_API aoimec_status aoimec_experiment_set_seed(aoimec_experiment* e, uint64_t seed);
/* "auto", "closed_form" or "monte_carlo". */
AOIMEC_API aoimec_status aoimec_experiment_set_stp_source(aoimec_experiment* e,
                                                          const char* source);
AOIMEC_API aoimec_status aoimec_experiment_set_output_dir(aoimec_experiment* e,
                                                          const char* dir);
AOIMEC_API const char* aoimec_experiment_output_dir(const aoimec_experiment* e);
/* Runs a named experiment and writes its csv and manifest into the output
   directory. The csv path is copied into path_buf when it is non-NULL. */
AOIMEC_API aoimec_status aoimec_experiment_run(aoimec_experiment* e, const char* name,
                                               char* path_buf, size_t path_buf_len);
/* Space separated list of experiment names. */
AOIMEC_API const char* aoimec_experiment_names(void);
AOIMEC_API void aoimec_experiment_free(aoimec_experiment* e);

#ifdef __cplusplus
}
#endif

#endif
