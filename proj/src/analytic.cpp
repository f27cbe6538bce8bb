#include "aoimec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aoimec/error.hpp"

namespace aoimec {

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::kLocal: return "local";
    case Scheme::kRemote: return "remote";
    case Scheme::kPartial: return "partial";
  }
  return "?";
}

const char* to_string(XiForm f) {
  return f == XiForm::kCorrected ? "corrected" : "literal";
}

Coefficients coefficients(const JacksonRates& r, double xi, double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw InvalidArgumentError("partial scheme needs 0 < beta < 1, got " +
                               std::to_string(beta));
  if (!(xi > 0.0)) throw InvalidArgumentError("xi must be positive");
  if (!(r.mu_l > 0.0 && r.mu_t > 0.0 && r.mu_e > 0.0))
    throw InvalidArgumentError("service rates must be positive");
  if (!((1.0 - beta) * xi < r.mu_l))
    throw InstabilityError("C2", "local queue unstable: (1-beta) xi >= mu_l");
  if (!(beta * xi < r.mu_t))
    throw InstabilityError("C3", "transmit queue unstable: beta xi >= mu_t");
  if (!(beta * xi < r.mu_e))
    throw InstabilityError("C4", "edge queue unstable: beta xi >= mu_e");
  if (std::abs(r.mu_e - r.mu_t) < kSingularGap * std::max(r.mu_t, r.mu_e))
    throw SingularityError("mu_e - mu_t",
                           "mu_t and mu_e coincide; eta is unbounded");

  const double ml = r.mu_l, mt = r.mu_t, me = r.mu_e;
  Coefficients c;
  c.omega_t = ml + mt - xi;
  c.omega_e = ml + me - xi;
  c.chi_l = ml - (1.0 - beta) * xi;
  c.chi_t = mt - beta * xi;
  c.chi_e = me - beta * xi;
  c.gamma = ml + mt + me - xi;
  c.omega_lt = ml + mt - beta * xi;
  c.omega_le = ml + me - beta * xi;
  c.omega_te = mt + me - beta * xi;
  c.eta = c.chi_t * c.chi_e / (me - mt);
  c.rho_l = (1.0 - beta) * xi / ml;
  return c;
}

double prob_local_dominates(const Coefficients& c) {
  return c.chi_t * c.chi_e / (c.omega_t * c.omega_e);
}

double prob_remote_dominates(const Coefficients& c) {
  return 1.0 - prob_local_dominates(c);
}

// The Xi functions below are written to mirror the literal expressions term by
// term; see XiForm for the two places where the corrected form departs.

double xi1(const Coefficients& c, const JacksonRates& r, double xi, double beta,
           XiForm form) {
  const double ml = r.mu_l, mt = r.mu_t, me = r.mu_e;
  const double Olt = c.omega_lt, Ole = c.omega_le;
  const double wt = c.omega_t, we = c.omega_e, chl = c.chi_l;
  const double one_b = 1.0 - beta;

  const double inner_den = Ole * we - Olt * wt;
  if (std::abs(inner_den) < 1e-12 * Ole * we)
    throw SingularityError("Omega_le omega_e - Omega_lt omega_t",
                           "Xi1 inner denominator vanishes");

  const double t1 = 1.0 / (ml * xi);
  const double t2 = chl * (Olt + we) / (ml * xi * Olt * Ole);
  const double bracket_a =
      (Olt + Ole - ml) / inner_den * (Ole * we / wt - Olt * wt / we);
  const double tail = (mt - beta * xi) * (me - beta * xi) / ml + Olt + Ole - ml;
  double bracket_b = 0.0;
  double last = 0.0;
  if (form == XiForm::kLiteral) {
    bracket_b = (3.0 * mt - 2.0 * beta * xi) / chl * tail;
    last = 2.0 * one_b * one_b / (ml * ml * ml);
  } else {
    bracket_b = (3.0 * ml - 2.0 * one_b * xi) / (ml * chl) * tail;
    last = 2.0 * one_b * one_b * xi / (ml * ml * ml);
  }
  const double t3 = one_b * one_b * xi / (ml * Olt * Ole) * (bracket_a + bracket_b);
  return t1 + t2 + t3 - last;
}

double xi2(const Coefficients& c, const JacksonRates& r, double xi, double beta,
           XiForm form) {
  const double ml = r.mu_l, mt = r.mu_t, me = r.mu_e;
  const double Olt = c.omega_lt, Ole = c.omega_le;
  const double wt = c.omega_t, we = c.omega_e;
  const double b2 = beta * beta;

  const double t1 = 1.0 / (mt * xi);
  const double t2 = (mt - beta * xi) * (me - beta * xi) /
                    (mt * xi * Olt * (Ole + wt - ml));
  const double first_den = form == XiForm::kLiteral
                               ? mt * (mt - beta * xi)
                               : mt * mt * (mt - beta * xi);
  const double bracket =
      (3.0 * mt - 2.0 * beta * xi) / first_den + (me - beta * xi) / (wt * we * Olt);
  const double t3 = b2 * xi / mt * bracket;
  return t1 + t2 + t3 - 2.0 * b2 * xi / (mt * mt * mt);
}

double xi3(const Coefficients& c, const JacksonRates& r, double xi, double beta) {
  const double mt = r.mu_t, me = r.mu_e;
  return 1.0 / (me * xi) + (mt - beta * xi) / (xi * c.omega_le * c.gamma);
}

double xi4(const Coefficients& c, const JacksonRates& r, double xi, double beta) {
  const double mt = r.mu_t, me = r.mu_e;
  const double wt = c.omega_t, we = c.omega_e, g = c.gamma;
  const double Ole = c.omega_le, Ote = c.omega_te, chl = c.chi_l;
  const double t1 = me * (mt - beta * xi) / (mt * wt * Ole) *
                    (1.0 / (me - beta * xi) + 1.0 / we + 1.0 / g);
  const double t2 = 1.0 / (mt * Ote);
  const double t3 = chl * g * (mt + 2.0 * me - 2.0 * beta * xi) /
                    (mt * wt * (me - beta * xi) * Ote * Ole);
  return t1 - t2 + t3;
}

double xi5(const Coefficients& c, const JacksonRates& r, double xi, double beta) {
  const double mt = r.mu_t, me = r.mu_e;
  const double wt = c.omega_t, we = c.omega_e, g = c.gamma;
  const double Ote = c.omega_te, chl = c.chi_l;
  const double che = me - beta * xi;
  const double pair = (chl + mt) * (chl + me);
  const double b1 = 1.0 / che;
  const double b2 = 1.0 / Ote;
  const double b3 = mt * me / pair * (1.0 / wt + 1.0 / g);
  const double b4 = chl * (chl + mt + me) / pair * (me / (g * (g + me)) + 1.0 / Ote);
  const double b5 = me * che / (g * ((we + me) * g + me * che));
  return (mt + me) / (mt * me) * (b1 - b2 + b3 + b4 - b5);
}

MaoiReport maoi_partial(const JacksonRates& r, double xi, double beta,
                        XiForm form) {
  const Coefficients c = coefficients(r, xi, beta);
  const double mt = r.mu_t, me = r.mu_e;
  std::array<double, 5> x{
      xi1(c, r, xi, beta, form), xi2(c, r, xi, beta, form), xi3(c, r, xi, beta),
      xi4(c, r, xi, beta), xi5(c, r, xi, beta)};

  const double b2xi = beta * beta * xi;
  const double remote_part = x[1] + x[2] + b2xi / c.omega_te * x[3] +
                             b2xi * c.chi_t / (me * c.omega_te) * x[4];
  const double bracket = (mt - beta * xi) * (me - beta * xi) * x[0] +
                         c.chi_l * (c.gamma + beta * xi) * remote_part;

  MaoiReport rep;
  rep.scheme = Scheme::kPartial;
  rep.maoi = xi / (c.omega_t * c.omega_e) * bracket + 1.0 / xi;
  rep.xi_terms = x;
  rep.p_local_dominates = prob_local_dominates(c);
  rep.p_remote_dominates = prob_remote_dominates(c);
  rep.coefficients = c;
  return rep;
}

MaoiReport maoi_partial_with_fallback(const JacksonRates& r, double xi,
                                      double beta, XiForm form) {
  try {
    return maoi_partial(r, xi, beta, form);
  } catch (const SingularityError&) {
    JacksonRates p = r;
    p.mu_e *= 1.0 + kSingularPerturbation;
    return maoi_partial(p, xi, beta, form);
  }
}

MaoiReport maoi_local(double mu_l, double xi) {
  if (!(xi > 0.0 && mu_l > 0.0))
    throw InvalidArgumentError("rates must be positive");
  if (!(xi < mu_l))
    throw InstabilityError("local", "local queue unstable: xi >= mu_l");
  MaoiReport rep;
  rep.scheme = Scheme::kLocal;
  rep.maoi = xi * xi / (mu_l * mu_l * (mu_l - xi)) + 1.0 / mu_l + 1.0 / xi;
  rep.p_local_dominates = 1.0;
  rep.p_remote_dominates = 0.0;
  return rep;
}

MaoiReport maoi_remote(double mu_t, double mu_e, double xi) {
  if (!(xi > 0.0 && mu_t > 0.0 && mu_e > 0.0))
    throw InvalidArgumentError("rates must be positive");
  if (!(xi < mu_t))
    throw InstabilityError("transmit", "transmit queue unstable: xi >= mu_t");
  if (!(xi < mu_e))
    throw InstabilityError("edge", "edge queue unstable: xi >= mu_e");
  const double s = mu_t + mu_e;
  const double first = xi * xi * (s * (s - xi) - mu_t * mu_e) /
                       (mu_t * mu_e * mu_e * (mu_e - xi) * (s - xi));
  MaoiReport rep;
  rep.scheme = Scheme::kRemote;
  rep.maoi = first + xi * xi / (mu_t * mu_t * (mu_t - xi)) + 1.0 / mu_t +
             1.0 / xi + 1.0 / mu_e;
  rep.p_local_dominates = 0.0;
  rep.p_remote_dominates = 1.0;
  return rep;
}

MaoiReport maoi_for(const ServiceRates& rates, double xi, XiForm form) {
  if (rates.beta == 0.0) return maoi_local(*rates.mu_l, xi);
  if (rates.beta == 1.0) return maoi_remote(*rates.mu_t, *rates.mu_e, xi);
  return maoi_partial_with_fallback(rates.partial(), xi, rates.beta, form);
}

}  // namespace aoimec
