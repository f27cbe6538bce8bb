#include "aoimec/stp.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "aoimec/error.hpp"
#include "aoimec/parallel.hpp"
#include "aoimec/rng.hpp"

namespace aoimec {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double nu) {
  return nu <= 0.0 && nu == std::floor(nu) && nu >= -170.0;
}

// m! e^{-x} sum_{k=0}^{m} 1 / (k! x^{m-k+1}), written as a falling-factorial
// sum so no factorial is formed explicitly.
double exp_integral_negative_integer(int m, double x) {
  double term = 1.0 / x;
  double sum = term;
  for (int j = 1; j <= m; ++j) {
    term *= static_cast<double>(m - j + 1) / x;
    sum += term;
  }
  return std::exp(-x) * sum;
}

}  // namespace

void RadioConfig::validate() const {
  if (!(alpha > 2.0))
    throw DomainError("pathloss exponent alpha must exceed 2 (got " +
                      std::to_string(alpha) + ")");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw DomainError("power-control factor epsilon must lie in [0, 1]");
  if (!(tau_linear > 0.0))
    throw DomainError("SIR threshold must be positive");
  if (!(lambda_b > 0.0)) throw DomainError("BS density must be positive");
  if (!(p_tx > 0.0)) throw DomainError("transmit power must be positive");
}

void McStpConfig::validate() const {
  if (iterations < 1) throw InvalidArgumentError("iterations must be >= 1");
  if (!(window_radius_factor >= 10.0))
    throw InvalidArgumentError("window_radius_factor must be >= 10");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double cell_radius(double lambda_b) { return 1.0 / std::sqrt(kPi * lambda_b); }

double sigma_coefficient(const RadioConfig& cfg) {
  cfg.validate();
  const double a = cfg.alpha;
  return 2.0 * kPi * std::pow(cfg.tau_linear, 2.0 / a) /
         (a * (1.0 + cfg.epsilon) * std::sin(2.0 * kPi / a));
}

double generalized_exp_integral_quadrature(double nu, double x) {
  if (!(x > 0.0))
    throw DomainError("generalized exponential integral needs x > 0");
  // t = 1 + s/x maps the integral to e^{-x}/x * int_0^inf e^{-s} (1+s/x)^{-nu} ds.
  auto f = [nu, x](double s) { return std::exp(-s) * std::pow(1.0 + s / x, -nu); };
  double err = 0.0;
  const double inner = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-14, &err);
  return std::exp(-x) / x * inner;
}

double generalized_exp_integral(double nu, double x) {
  if (!(x > 0.0))
    throw DomainError("generalized exponential integral needs x > 0");
  if (is_nonpositive_integer(nu))
    return exp_integral_negative_integer(static_cast<int>(-nu), x);
  return generalized_exp_integral_quadrature(nu, x);
}

namespace {

StpResult closed_form_impl(const RadioConfig& cfg, bool lower_gamma) {
  StpResult r;
  r.sigma = sigma_coefficient(cfg);
  if (cfg.epsilon == 1.0) {
    r.branch = StpBranch::kFullInversion;
    r.theta = std::exp(-r.sigma);
  } else {
    r.branch = StpBranch::kPartialInversion;
    const double nu = cfg.epsilon / (cfg.epsilon - 1.0);
    const double k = 1.0 / (1.0 - cfg.epsilon);
    const double g = lower_gamma ? boost::math::tgamma_lower(1.0 + k, r.sigma)
                                 : std::tgamma(1.0 + k);
    r.theta = generalized_exp_integral(nu, r.sigma) + std::pow(r.sigma, k) * g;
  }
  r.valid = r.theta >= 0.0 && r.theta <= 1.0;
  return r;
}

}  // namespace

StpResult stp_closed_form(const RadioConfig& cfg) {
  return closed_form_impl(cfg, false);
}

StpResult stp_closed_form_lower_gamma(const RadioConfig& cfg) {
  return closed_form_impl(cfg, true);
}

double sample_sir(const RadioConfig& cfg, double window_radius_factor,
                  std::uint64_t seed) {
  Rng rng(seed);
  const double rc = cell_radius(cfg.lambda_b);
  const double rw = window_radius_factor * rc;
  const double a = cfg.alpha;
  const double eps = cfg.epsilon;

  const double r0 = rc * std::sqrt(rng.uniform_open0());
  const double h0 = rng.exponential(1.0);
  const double signal = h0 * std::pow(r0, -a * (1.0 - eps));

  const double mean_bs = cfg.lambda_b * kPi * rw * rw;
  boost::random::poisson_distribution<std::int64_t, double> poisson(mean_bs);
  const std::int64_t n = poisson(rng);

  // Interferer i sits at distance rb from the origin and its UE at distance
  // ru from it, separated by a uniform angle phi, so
  // D^2 = rb^2 + ru^2 + 2 rb ru cos(phi). With ru = rc sqrt(v) the power
  // control factor ru^(alpha eps) becomes rc^(alpha eps) v^(alpha eps / 2).
  const double half_a = 0.5 * a;
  const double ue_exp = 0.5 * a * eps;
  const double ue_scale = std::pow(rc, a * eps);
  double interference = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double rb = rw * std::sqrt(rng.uniform());
    const double v = rng.uniform_open0();
    const double phi = 2.0 * kPi * rng.uniform();
    const double h = rng.exponential(1.0);
    const double ru = rc * std::sqrt(v);
    const double d2 = rb * rb + ru * ru + 2.0 * rb * ru * std::cos(phi);
    const double path = half_a == 2.0 ? 1.0 / (d2 * d2) : std::pow(d2, -half_a);
    const double ctrl = ue_exp == 1.0 ? v : (ue_exp == 0.0 ? 1.0 : std::pow(v, ue_exp));
    interference += h * path * ctrl;
  }
  interference *= ue_scale;
  if (interference == 0.0) return std::numeric_limits<double>::infinity();
  return signal / interference;
}

double McStpResult::theta_at(double tau_linear) const {
  if (samples.empty()) return 0.0;
  const auto hits = std::count_if(samples.begin(), samples.end(),
                                  [tau_linear](double s) { return s > tau_linear; });
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double McStpResult::ci_at(double tau_linear) const {
  if (samples.empty()) return 0.0;
  const double p = theta_at(tau_linear);
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(samples.size()));
}

McStpResult stp_monte_carlo(const RadioConfig& cfg, const McStpConfig& mc) {
  cfg.validate();
  mc.validate();
  McStpResult out;
  out.samples.resize(mc.iterations);
  parallel_for(
      mc.iterations,
      [&](std::size_t k) {
        out.samples[k] = sample_sir(cfg, mc.window_radius_factor,
                                    derive_seed(mc.seed, k));
      },
      mc.threads);
  out.theta_hat = out.theta_at(cfg.tau_linear);
  out.ci_halfwidth = out.ci_at(cfg.tau_linear);
  return out;
}

}  // namespace aoimec
