#pragma once

#include <cstdint>
#include <vector>

namespace aoimec {

// Uplink radio parameters. Thresholds are linear ratios; dB conversion happens
// only at the configuration boundary (see db_to_linear).
struct RadioConfig {
  double tau_linear = 1.0;  // SIR threshold
  double alpha = 4.0;       // pathloss exponent, > 2
  double epsilon = 0.5;     // fractional channel-inversion factor in [0, 1]
  double lambda_b = 1e-4;   // BS density, per m^2
  double p_tx = 1.0;        // fixed transmit power, W; cancels in the SIR

  void validate() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);

// Mean cell radius 1/sqrt(pi * lambda_b).
double cell_radius(double lambda_b);

enum class StpBranch { kPartialInversion, kFullInversion };

struct StpResult {
  double sigma = 0.0;
  double theta = 0.0;
  StpBranch branch = StpBranch::kFullInversion;
  bool valid = false;  // theta in [0, 1]; theta is reported either way
};

struct McStpConfig {
  std::uint64_t iterations = 100000;
  double window_radius_factor = 30.0;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency; result is unaffected

  void validate() const;
};

struct McStpResult {
  double theta_hat = 0.0;
  double ci_halfwidth = 0.0;
  std::vector<double> samples;  // linear SIR per realization, +inf if no interferer

  // Re-thresholds the recorded samples; SIR does not depend on tau.
  double theta_at(double tau_linear) const;
  double ci_at(double tau_linear) const;
};

// 2*pi*tau^(2/alpha) / (alpha * (1 + eps) * sin(2*pi/alpha)).
double sigma_coefficient(const RadioConfig& cfg);

// Integral over [1, inf) of exp(-x t) t^(-nu) dt, x > 0.
// Nonpositive integer orders use the closed form from repeated integration by
// parts; other orders use adaptive Gauss-Kronrod quadrature.
double generalized_exp_integral(double nu, double x);

// Quadrature path of generalized_exp_integral regardless of nu. Exposed so the
// integer closed form can be cross-checked.
double generalized_exp_integral_quadrature(double nu, double x);

// Closed-form STP. For eps < 1 the partial-inversion expression
// E_{eps/(eps-1)}(sigma) + sigma^(1/(1-eps)) * Gamma(1 + 1/(1-eps)) is evaluated
// literally and flagged invalid when it leaves [0, 1].
StpResult stp_closed_form(const RadioConfig& cfg);

// Same as stp_closed_form but with Gamma replaced by the lower incomplete gamma
// function gamma(1 + 1/(1-eps), sigma). Conjectured repair, not a reference.
StpResult stp_closed_form_lower_gamma(const RadioConfig& cfg);

// One SIR realization at the typical BS (origin). Interfering BSs form a PPP of
// density lambda_b in a disc of radius window_radius_factor * cell_radius; each
// carries exactly one active UE placed uniformly in its own cell disc.
double sample_sir(const RadioConfig& cfg, double window_radius_factor,
                  std::uint64_t seed);

// Empirical P(SIR > tau). Realization k uses substream k of mc.seed, so serial
// and parallel runs are bit-identical.
McStpResult stp_monte_carlo(const RadioConfig& cfg, const McStpConfig& mc);

}  // namespace aoimec
