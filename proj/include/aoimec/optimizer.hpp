#pragma once

#include <cstddef>

#include "aoimec/analytic.hpp"
#include "aoimec/rates.hpp"

namespace aoimec {

// The fixed physical setting an optimization runs over. task.cor and
// task.tgr are ignored; they are the decision variables.
struct OptProblem {
  TaskProfile task;
  PlatformProfile plat;
  double tau_linear = 1.0;
  double theta = 0.5;
};

struct OptConfig {
  double beta_lo = 0.0;
  double beta_hi = 1.0;
  double xi_lo = 1e-3;
  double xi_hi = 0.0;  // 0: the largest xi feasible anywhere in the beta range
  double stability_margin = 1e-6;
  int coarse_grid = 64;
  double tolerance = 1e-5;
  int max_refinements = 100;
  XiForm form = XiForm::kCorrected;
  unsigned threads = 0;

  void validate() const;
};

struct OptimumReport {
  double beta_star = 0.0;
  double xi_star = 0.0;
  double maoi_star = 0.0;
  std::size_t evaluations = 0;
  double feasible_fraction = 0.0;
  // Optimum within a few tolerances of a box bound or with some queue load
  // at the stability cap.
  bool boundary_flag = false;
  int refinements = 0;
};

// C1-C4 with loads capped at 1 - margin, rates recomputed at this beta.
// For beta = 0 or 1 only the queues that carry traffic are checked.
bool feasible(double beta, double xi, const OptProblem& p, double margin = 1e-6);

// MAoI at (beta, xi): local at beta = 0, remote at beta = 1, partial otherwise
// (with the singular fallback). +inf where infeasible or not evaluable.
double objective(double beta, double xi, const OptProblem& p, double margin = 1e-6,
                 XiForm form = XiForm::kCorrected);

// Largest xi with feasible(beta, xi); 0 for beta outside [0, 1].
double xi_feasible_max(double beta, const OptProblem& p, double margin = 1e-6);

OptimumReport optimize_joint(const OptProblem& p, const OptConfig& cfg);
OptimumReport optimize_beta_given_xi(double xi, const OptProblem& p,
                                     const OptConfig& cfg);
OptimumReport optimize_xi_given_beta(double beta, const OptProblem& p,
                                     const OptConfig& cfg);

}  // namespace aoimec
