#pragma once

#include <functional>

#include "aoimec/analytic.hpp"

namespace aoimec {

// Intermediate quantities behind the partial-offloading closed form, each
// evaluable on its own. Notation: S^l local service, W^l local waiting time,
// T^l = S^l + W^l, T^te the transmit+edge system time, A the interarrival,
// E^l the event T^l > T^te, Y = T^te - S^l, X = T^te - W^l.
struct AppendixOracles {
  Coefficients coeff;

  double p_local_dominates = 0.0;        // P(E^l)
  double p_remote_dominates = 0.0;
  double p_prev_local_busy = 0.0;        // P(T^l_{n-1} > A^l_n) = (1-beta) xi / mu_l
  double p_y_positive = 0.0;             // P(Y > 0)
  double p_y_negative = 0.0;
  double e_service_given_local = 0.0;    // E[S^l | E^l]
  double e_interarrival_given_busy = 0.0;  // E[A^l | E^l, T > A] = 1/mu_l
  double e_interarrival_given_idle = 0.0;  // E[A^l | E^l, T < A]
  double e_product_given_busy = 0.0;       // (mu_l + 2 chi_l) / (mu_l^2 chi_l)
  // Literal form; its second term is not dimensionally consistent with the first.
  double e_product_given_busy_y_positive_literal = 0.0;
  double wait_atom_mass = 0.0;           // P(W^l = 0) = 1 - rho_l

  std::function<double(double)> density_local_system_time;   // f_{T^l}
  std::function<double(double)> density_remote_system_time;  // f_{T^te}
  std::function<double(double)> density_y;
  // f_X with (1 - rho_l) on the x > 0 branch; integrates to 1.
  std::function<double(double)> density_x;
  // f_X in literal form, rho_l on both branches.
  std::function<double(double)> density_x_literal;
  // Continuous part of f_{W^l}; the atom at 0 carries wait_atom_mass.
  std::function<double(double)> density_wait_continuous;
};

AppendixOracles appendix_oracles(const JacksonRates& r, double xi, double beta);

}  // namespace aoimec
