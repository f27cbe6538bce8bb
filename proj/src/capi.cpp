#include "aoimec/aoimec.h"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "aoimec/analytic.hpp"
#include "aoimec/error.hpp"
#include "aoimec/experiment.hpp"
#include "aoimec/optimizer.hpp"
#include "aoimec/rates.hpp"
#include "aoimec/sim.hpp"
#include "aoimec/stp.hpp"

struct aoimec_sim_result {
  aoimec::SimResult result;
};

struct aoimec_experiment {
  aoimec::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

aoimec_status status_of(aoimec::ErrorKind k) {
  using aoimec::ErrorKind;
  switch (k) {
    case ErrorKind::kInvalidArgument: return AOIMEC_ERR_INVALID_ARGUMENT;
    case ErrorKind::kDomain: return AOIMEC_ERR_DOMAIN;
    case ErrorKind::kInstability: return AOIMEC_ERR_INSTABILITY;
    case ErrorKind::kSingularity: return AOIMEC_ERR_SINGULARITY;
    case ErrorKind::kInfeasible: return AOIMEC_ERR_INFEASIBLE;
    case ErrorKind::kConfig: return AOIMEC_ERR_CONFIG;
    case ErrorKind::kInsufficientSamples: return AOIMEC_ERR_INSUFFICIENT_SAMPLES;
    case ErrorKind::kIo: return AOIMEC_ERR_IO;
  }
  return AOIMEC_ERR_INTERNAL;
}

template <class F>
aoimec_status guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return AOIMEC_OK;
  } catch (const aoimec::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return AOIMEC_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  if (!p) throw aoimec::InvalidArgumentError(std::string(what) + " is NULL");
}

aoimec::RadioConfig radio_of(const aoimec_radio* r) {
  aoimec::RadioConfig c;
  c.tau_linear = r->tau_linear;
  c.alpha = r->alpha;
  c.epsilon = r->epsilon;
  c.lambda_b = r->lambda_b;
  return c;
}

aoimec::TaskProfile task_of(const aoimec_task* t) {
  return {t->mean_size_bits, t->cycles_per_bit, t->tgr, t->cor};
}

aoimec::PlatformProfile platform_of(const aoimec_platform* p) {
  return {p->ue_cpu_hz, p->bs_cpu_hz, p->ues_per_bs, p->total_bandwidth_hz};
}

void fill(const aoimec::MaoiReport& r, aoimec_maoi* out) {
  std::memset(out, 0, sizeof *out);
  out->maoi = r.maoi;
  if (r.xi_terms)
    for (int i = 0; i < 5; ++i) out->xi_terms[i] = (*r.xi_terms)[i];
  out->p_local_dominates = r.p_local_dominates;
  out->p_remote_dominates = r.p_remote_dominates;
}

}  // namespace

extern "C" {

const char* aoimec_version(void) {
  static const std::string v = aoimec::library_version();
  return v.c_str();
}

const char* aoimec_status_string(aoimec_status s) {
  switch (s) {
    case AOIMEC_OK: return "ok";
    case AOIMEC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case AOIMEC_ERR_DOMAIN: return "domain error";
    case AOIMEC_ERR_INSTABILITY: return "unstable queue";
    case AOIMEC_ERR_SINGULARITY: return "numeric singularity";
    case AOIMEC_ERR_INFEASIBLE: return "infeasible problem";
    case AOIMEC_ERR_CONFIG: return "config error";
    case AOIMEC_ERR_INSUFFICIENT_SAMPLES: return "insufficient samples";
    case AOIMEC_ERR_IO: return "i/o error";
    case AOIMEC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* aoimec_last_error(void) { return g_last_error.c_str(); }

void aoimec_radio_defaults(aoimec_radio* r) {
  if (!r) return;
  const aoimec::RadioConfig d;
  *r = {d.tau_linear, d.alpha, d.epsilon, d.lambda_b};
}

void aoimec_task_defaults(aoimec_task* t) {
  if (!t) return;
  const aoimec::TaskProfile d;
  *t = {d.mean_size_bits, d.cycles_per_bit, d.tgr, d.cor};
}

void aoimec_platform_defaults(aoimec_platform* p) {
  if (!p) return;
  const aoimec::PlatformProfile d;
  *p = {d.ue_cpu_hz, d.bs_cpu_hz, d.ues_per_bs, d.total_bandwidth_hz};
}

aoimec_status aoimec_stp_closed_form(const aoimec_radio* r, double* theta, double* sigma,
                                     int* valid) {
  return guard([&] {
    need(r, "radio");
    const aoimec::StpResult s = aoimec::stp_closed_form(radio_of(r));
    if (theta) *theta = s.theta;
    if (sigma) *sigma = s.sigma;
    if (valid) *valid = s.valid ? 1 : 0;
  });
}

aoimec_status aoimec_stp_monte_carlo(const aoimec_radio* r, size_t iterations,
                                     double window_radius_factor, uint64_t seed,
                                     double* theta_hat, double* ci_halfwidth) {
  return guard([&] {
    need(r, "radio");
    aoimec::McStpConfig mc;
    mc.iterations = iterations;
    mc.window_radius_factor = window_radius_factor;
    mc.seed = seed;
    const aoimec::McStpResult m = aoimec::stp_monte_carlo(radio_of(r), mc);
    if (theta_hat) *theta_hat = m.theta_hat;
    if (ci_halfwidth) *ci_halfwidth = m.ci_halfwidth;
  });
}

aoimec_status aoimec_service_rates(const aoimec_task* t, const aoimec_platform* p,
                                   double tau_linear, double theta, aoimec_rates* out) {
  return guard([&] {
    need(t, "task");
    need(p, "platform");
    need(out, "out");
    const aoimec::ServiceRates r =
        aoimec::service_rates(task_of(t), platform_of(p), tau_linear, theta);
    out->mu_l = r.mu_l.value_or(0.0);
    out->mu_t = r.mu_t.value_or(0.0);
    out->mu_e = r.mu_e.value_or(0.0);
  });
}

aoimec_status aoimec_maoi_local(double mu_l, double xi, double* maoi) {
  return guard([&] {
    need(maoi, "out");
    *maoi = aoimec::maoi_local(mu_l, xi).maoi;
  });
}

aoimec_status aoimec_maoi_remote(double mu_t, double mu_e, double xi, double* maoi) {
  return guard([&] {
    need(maoi, "out");
    *maoi = aoimec::maoi_remote(mu_t, mu_e, xi).maoi;
  });
}

aoimec_status aoimec_maoi_partial(const aoimec_rates* r, double xi, double beta,
                                  int literal_form, aoimec_maoi* out) {
  return guard([&] {
    need(r, "rates");
    need(out, "out");
    const auto form = literal_form ? aoimec::XiForm::kLiteral : aoimec::XiForm::kCorrected;
    fill(aoimec::maoi_partial_with_fallback({r->mu_l, r->mu_t, r->mu_e}, xi, beta, form),
         out);
  });
}

aoimec_status aoimec_optimize(const aoimec_task* t, const aoimec_platform* p,
                              double tau_linear, double theta, aoimec_opt_mode mode,
                              double fixed, aoimec_optimum* out) {
  return guard([&] {
    need(t, "task");
    need(p, "platform");
    need(out, "out");
    aoimec::OptProblem prob{task_of(t), platform_of(p), tau_linear, theta};
    const aoimec::OptConfig cfg;
    aoimec::OptimumReport r;
    switch (mode) {
      case AOIMEC_OPT_JOINT: r = aoimec::optimize_joint(prob, cfg); break;
      case AOIMEC_OPT_BETA_GIVEN_XI: r = aoimec::optimize_beta_given_xi(fixed, prob, cfg); break;
      case AOIMEC_OPT_XI_GIVEN_BETA: r = aoimec::optimize_xi_given_beta(fixed, prob, cfg); break;
      default: throw aoimec::InvalidArgumentError("unknown optimization mode");
    }
    *out = {r.beta_star, r.xi_star, r.maoi_star, r.evaluations, r.feasible_fraction,
            r.boundary_flag ? 1 : 0};
  });
}

aoimec_status aoimec_simulate(const aoimec_rates* r, double xi, double beta,
                              aoimec_split_mode mode, size_t n_tasks,
                              double warmup_fraction, uint64_t seed,
                              aoimec_sim_result** out) {
  return guard([&] {
    need(r, "rates");
    need(out, "out");
    *out = nullptr;
    aoimec::SimConfig c;
    c.rates = {r->mu_l, r->mu_t, r->mu_e};
    c.xi = xi;
    c.beta = beta;
    c.split_mode = mode == AOIMEC_SPLIT_THIN ? aoimec::SplitMode::kThin
                                             : aoimec::SplitMode::kReplicate;
    c.n_tasks = n_tasks;
    c.warmup_fraction = warmup_fraction;
    c.seed = seed;
    auto h = std::make_unique<aoimec_sim_result>();
    h->result = aoimec::simulate_partial(c);
    *out = h.release();
  });
}

aoimec_status aoimec_sim_result_maoi(const aoimec_sim_result* s, double* maoi,
                                     double* stderr_out) {
  return guard([&] {
    need(s, "result");
    if (maoi) *maoi = s->result.stats.maoi_hat;
    if (stderr_out) *stderr_out = s->result.stats.stderr;
  });
}

size_t aoimec_sim_result_task_count(const aoimec_sim_result* s) {
  return s ? s->result.records.size() : 0;
}

aoimec_status aoimec_sim_result_task(const aoimec_sim_result* s, size_t i,
                                     aoimec_task_record* out) {
  return guard([&] {
    need(s, "result");
    need(out, "out");
    if (i >= s->result.records.size())
      throw aoimec::InvalidArgumentError("task index out of range");
    const auto& r = s->result.records[i];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *out = {r.gen_time, r.local_done.value_or(nan), r.edge_done.value_or(nan),
            r.complete_time, r.system_time_max, r.interarrival};
  });
}

aoimec_status aoimec_sim_result_write_trace(const aoimec_sim_result* s, const char* path) {
  return guard([&] {
    need(s, "result");
    need(path, "path");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw aoimec::IoError(std::string("cannot write ") + path);
    aoimec::write_trace_csv(os, s->result.records);
  });
}

void aoimec_sim_result_free(aoimec_sim_result* s) { delete s; }

aoimec_status aoimec_experiment_defaults(aoimec_experiment** out) {
  return guard([&] {
    need(out, "out");
    *out = new aoimec_experiment{aoimec::ExperimentConfig::defaults()};
  });
}

aoimec_status aoimec_experiment_load(const char* path, aoimec_experiment** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new aoimec_experiment{aoimec::load_config_file(path)};
  });
}

aoimec_status aoimec_experiment_load_string(const char* yaml, aoimec_experiment** out) {
  return guard([&] {
    need(yaml, "yaml");
    need(out, "out");
    *out = nullptr;
    *out = new aoimec_experiment{aoimec::load_config_string(yaml)};
  });
}

aoimec_status aoimec_experiment_set_seed(aoimec_experiment* e, uint64_t seed) {
  return guard([&] {
    need(e, "experiment");
    e->cfg.set_seed(seed);
  });
}

aoimec_status aoimec_experiment_set_stp_source(aoimec_experiment* e, const char* source) {
  return guard([&] {
    need(e, "experiment");
    need(source, "source");
    e->cfg.stp_source = aoimec::parse_stp_source(source);
  });
}

aoimec_status aoimec_experiment_set_output_dir(aoimec_experiment* e, const char* dir) {
  return guard([&] {
    need(e, "experiment");
    need(dir, "dir");
    e->cfg.output_dir = dir;
  });
}

const char* aoimec_experiment_output_dir(const aoimec_experiment* e) {
  return e ? e->cfg.output_dir.c_str() : "";
}

aoimec_status aoimec_experiment_run(aoimec_experiment* e, const char* name, char* path_buf,
                                    size_t path_buf_len) {
  return guard([&] {
    need(e, "experiment");
    need(name, "name");
    const auto t0 = std::chrono::steady_clock::now();
    const aoimec::ExperimentOutput out = aoimec::run_experiment(name, e->cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string path = aoimec::write_outputs(out, e->cfg, e->cfg.output_dir, wall);
    if (path_buf && path_buf_len > 0) {
      std::strncpy(path_buf, path.c_str(), path_buf_len - 1);
      path_buf[path_buf_len - 1] = '\0';
    }
  });
}

const char* aoimec_experiment_names(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : aoimec::experiment_names()) s += (s.empty() ? "" : " ") + n;
    return s;
  }();
  return names.c_str();
}

void aoimec_experiment_free(aoimec_experiment* e) { delete e; }

}  // extern "C"
