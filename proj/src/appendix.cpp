#include "aoimec/appendix.hpp"

#include <cmath>

namespace aoimec {

AppendixOracles appendix_oracles(const JacksonRates& r, double xi, double beta) {
  AppendixOracles o;
  const Coefficients c = coefficients(r, xi, beta);
  o.coeff = c;
  const double ml = r.mu_l, mt = r.mu_t, me = r.mu_e;
  const double lam = (1.0 - beta) * xi;
  const double chl = c.chi_l, cht = c.chi_t, che = c.chi_e;
  const double Olt = c.omega_lt, Ole = c.omega_le;
  const double wt = c.omega_t, we = c.omega_e;
  const double eta = c.eta, rho = c.rho_l;

  o.p_local_dominates = prob_local_dominates(c);
  o.p_remote_dominates = prob_remote_dominates(c);
  o.p_prev_local_busy = lam / ml;
  o.p_y_positive = ml * (ml + mt + me - 2.0 * beta * xi) / (Olt * Ole);
  o.p_y_negative = 1.0 - o.p_y_positive;
  o.e_service_given_local = 1.0 / ml + chl * (Olt + we) / (ml * Olt * Ole);
  o.e_interarrival_given_busy = 1.0 / ml;
  o.e_interarrival_given_idle = (ml + lam) / (ml * lam);
  o.e_product_given_busy = (ml + 2.0 * chl) / (ml * ml * chl);
  o.e_product_given_busy_y_positive_literal =
      o.e_product_given_busy +
      (Ole * we / wt - Olt * wt / we) / (Ole * we - Olt * wt);
  o.wait_atom_mass = 1.0 - rho;

  o.density_local_system_time = [chl](double t) {
    return t < 0.0 ? 0.0 : chl * std::exp(-chl * t);
  };
  o.density_remote_system_time = [eta, cht, che](double t) {
    return t < 0.0 ? 0.0 : eta * (std::exp(-cht * t) - std::exp(-che * t));
  };
  o.density_y = [=](double y) {
    if (y >= 0.0)
      return ml * eta * (std::exp(-cht * y) / Olt - std::exp(-che * y) / Ole);
    return ml * eta * (me - mt) / (Olt * Ole) * std::exp(ml * y);
  };
  auto fx = [=](double x, double pos_weight) {
    if (x >= 0.0)
      return eta * pos_weight *
             (Olt / wt * std::exp(-cht * x) - Ole / we * std::exp(-che * x));
    return eta * rho * chl * (me - mt) / (wt * we) * std::exp(chl * x);
  };
  o.density_x = [fx, rho](double x) { return fx(x, 1.0 - rho); };
  o.density_x_literal = [fx, rho](double x) { return fx(x, rho); };
  o.density_wait_continuous = [rho, chl](double w) {
    return w <= 0.0 ? 0.0 : rho * chl * std::exp(-chl * w);
  };
  return o;
}

}  // namespace aoimec
