#include "aoimec/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "aoimec/error.hpp"
#include "aoimec/parallel.hpp"

namespace aoimec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ServiceRates rates_at(double beta, const OptProblem& p) {
  TaskProfile t = p.task;
  t.cor = beta;
  return service_rates(t, p.plat, p.tau_linear, p.theta);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
  v.back() = b;
  return v;
}

struct Golden {
  double x;
  double f;
};

// Golden-section search on [a, b]; +inf values are treated as ordinary large
// values so an infeasible tail just pushes the bracket away.
template <class F>
Golden golden_section(F&& f, double a, double b, double tol, std::size_t& evals) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  evals += 2;
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc <= fd ? Golden{c, fc} : Golden{d, fd};
}

double max_load(double beta, double xi, const OptProblem& p) {
  const ServiceRates r = rates_at(beta, p);
  double load = 0.0;
  if (r.mu_l) load = std::max(load, (1.0 - beta) * xi / *r.mu_l);
  if (r.mu_t) load = std::max(load, beta * xi / *r.mu_t);
  if (r.mu_e) load = std::max(load, beta * xi / *r.mu_e);
  return load;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

void OptConfig::validate() const {
  if (!(beta_lo >= 0.0 && beta_hi <= 1.0 && beta_lo <= beta_hi))
    throw InvalidArgumentError("beta bounds must be a nonempty interval in [0, 1]");
  if (!(xi_lo > 0.0)) throw InvalidArgumentError("xi lower bound must be positive");
  if (xi_hi != 0.0 && !(xi_hi >= xi_lo))
    throw InvalidArgumentError("xi bounds must be a nonempty interval");
  if (!(stability_margin > 0.0 && stability_margin < 1.0))
    throw InvalidArgumentError("stability margin must lie in (0, 1)");
  if (coarse_grid < 8) throw InvalidArgumentError("coarse_grid must be >= 8");
  if (!(tolerance > 0.0)) throw InvalidArgumentError("tolerance must be positive");
  if (max_refinements < 1) throw InvalidArgumentError("max_refinements must be >= 1");
}

bool feasible(double beta, double xi, const OptProblem& p, double margin) {
  if (!(beta >= 0.0 && beta <= 1.0) || !(xi > 0.0)) return false;
  const ServiceRates r = rates_at(beta, p);
  const double cap = 1.0 - margin;
  if (r.mu_l && !((1.0 - beta) * xi <= cap * *r.mu_l)) return false;
  if (r.mu_t && !(beta * xi <= cap * *r.mu_t)) return false;
  if (r.mu_e && !(beta * xi <= cap * *r.mu_e)) return false;
  return true;
}

double xi_feasible_max(double beta, const OptProblem& p, double margin) {
  if (!(beta >= 0.0 && beta <= 1.0)) return 0.0;
  const ServiceRates r = rates_at(beta, p);
  double m = kInf;
  if (r.mu_l) m = std::min(m, *r.mu_l / (1.0 - beta));
  if (r.mu_t) m = std::min(m, *r.mu_t / beta);
  if (r.mu_e) m = std::min(m, *r.mu_e / beta);
  return (1.0 - margin) * m;
}

double objective(double beta, double xi, const OptProblem& p, double margin,
                 XiForm form) {
  if (!feasible(beta, xi, p, margin)) return kInf;
  try {
    const double v = maoi_for(rates_at(beta, p), xi, form).maoi;
    return std::isfinite(v) && v > 0.0 ? v : kInf;
  } catch (const SingularityError&) {
    return kInf;
  } catch (const InstabilityError&) {
    return kInf;
  }
}

namespace {

enum Axis { kBeta = 1, kXi = 2 };

OptimumReport refine(const OptProblem& p, const OptConfig& cfg, double b_lo,
                     double b_hi, double x_lo, double x_hi, int axes) {
  const int nb = (axes & kBeta) ? cfg.coarse_grid : 1;
  const int nx = (axes & kXi) ? cfg.coarse_grid : 1;
  const auto betas = linspace(b_lo, b_hi, nb);
  const auto xis = linspace(x_lo, x_hi, nx);
  std::vector<double> values(static_cast<std::size_t>(nb) * nx);
  parallel_for(
      values.size(),
      [&](std::size_t k) {
        values[k] = objective(betas[k / nx], xis[k % nx], p, cfg.stability_margin,
                              cfg.form);
      },
      cfg.threads);

  OptimumReport rep;
  rep.evaluations = values.size();
  std::size_t best_k = 0, n_feasible = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::isfinite(values[k])) ++n_feasible;
    if (values[k] < values[best_k]) best_k = k;
  }
  rep.feasible_fraction = static_cast<double>(n_feasible) / values.size();
  if (n_feasible == 0)
    throw InfeasibleError("no feasible point on the coarse grid");

  double b = betas[best_k / nx];
  double x = xis[best_k % nx];
  double best = values[best_k];
  double hb = nb > 1 ? (b_hi - b_lo) / (nb - 1) : 0.0;
  double hx = nx > 1 ? (x_hi - x_lo) / (nx - 1) : 0.0;
  const double tol = cfg.tolerance;

  for (int it = 0; it < cfg.max_refinements; ++it) {
    double move_b = 0.0, move_x = 0.0;
    if (axes & kBeta) {
      auto f = [&](double bb) {
        return objective(bb, x, p, cfg.stability_margin, cfg.form);
      };
      const Golden g = golden_section(f, std::max(b_lo, b - hb), std::min(b_hi, b + hb),
                                      tol, rep.evaluations);
      if (g.f < best) {
        move_b = std::abs(g.x - b);
        b = g.x;
        best = g.f;
      }
    }
    if (axes & kXi) {
      auto f = [&](double xx) {
        return objective(b, xx, p, cfg.stability_margin, cfg.form);
      };
      const Golden g = golden_section(f, std::max(x_lo, x - hx), std::min(x_hi, x + hx),
                                      tol, rep.evaluations);
      if (g.f < best) {
        move_x = std::abs(g.x - x);
        x = g.x;
        best = g.f;
      }
    }
    rep.refinements = it + 1;
    if (move_b < tol && move_x < tol) break;
    hb = std::max(hb / 2.0, 4.0 * tol);
    hx = std::max(hx / 2.0, 4.0 * tol);
  }

  rep.beta_star = b;
  rep.xi_star = x;
  rep.maoi_star = best;
  const double edge = 2.0 * tol;
  bool flag = false;
  if (axes & kBeta) flag = flag || near(b, b_lo, edge) || near(b, b_hi, edge);
  if (axes & kXi) flag = flag || near(x, x_lo, edge) || near(x, x_hi, edge);
  flag = flag || max_load(b, x, p) >= 1.0 - cfg.stability_margin - 1e-4;
  rep.boundary_flag = flag;
  return rep;
}

}  // namespace

OptimumReport optimize_joint(const OptProblem& p, const OptConfig& cfg) {
  cfg.validate();
  double x_hi = cfg.xi_hi;
  if (x_hi == 0.0) {
    for (double b : linspace(cfg.beta_lo, cfg.beta_hi, cfg.coarse_grid))
      x_hi = std::max(x_hi, xi_feasible_max(b, p, cfg.stability_margin));
  }
  if (!(x_hi > cfg.xi_lo)) throw InfeasibleError("xi range is empty");
  return refine(p, cfg, cfg.beta_lo, cfg.beta_hi, cfg.xi_lo, x_hi, kBeta | kXi);
}

OptimumReport optimize_beta_given_xi(double xi, const OptProblem& p,
                                     const OptConfig& cfg) {
  cfg.validate();
  if (!(xi > 0.0)) throw InvalidArgumentError("xi must be positive");
  return refine(p, cfg, cfg.beta_lo, cfg.beta_hi, xi, xi, kBeta);
}

OptimumReport optimize_xi_given_beta(double beta, const OptProblem& p,
                                     const OptConfig& cfg) {
  cfg.validate();
  if (!(beta >= 0.0 && beta <= 1.0))
    throw InvalidArgumentError("beta must lie in [0, 1]");
  const double x_hi =
      cfg.xi_hi != 0.0 ? cfg.xi_hi : xi_feasible_max(beta, p, cfg.stability_margin);
  if (!(x_hi > cfg.xi_lo)) throw InfeasibleError("xi range is empty at this beta");
  return refine(p, cfg, beta, beta, cfg.xi_lo, x_hi, kXi);
}

}  // namespace aoimec
