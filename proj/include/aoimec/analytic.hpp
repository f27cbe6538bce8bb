#pragma once

#include <array>
#include <optional>

#include "aoimec/rates.hpp"

namespace aoimec {

// Shorthand quantities of the partial-offloading closed form.
struct Coefficients {
  double omega_t = 0;   // mu_l + mu_t - xi
  double omega_e = 0;   // mu_l + mu_e - xi
  double chi_l = 0;     // mu_l - (1 - beta) xi
  double chi_t = 0;     // mu_t - beta xi
  double chi_e = 0;     // mu_e - beta xi
  double gamma = 0;     // mu_l + mu_t + mu_e - xi
  double omega_lt = 0;  // mu_l + mu_t - beta xi
  double omega_le = 0;  // mu_l + mu_e - beta xi
  double omega_te = 0;  // mu_t + mu_e - beta xi
  double eta = 0;       // chi_t chi_e / (mu_e - mu_t)
  double rho_l = 0;     // (1 - beta) xi / mu_l
};

// Which transcription of the first two conditional-expectation terms to use.
//
// kLiteral reproduces the published expressions character for character. Two
// of their terms are not dimensionally homogeneous (they mix s and s^2), and
// the resulting MAoI diverges as beta -> 0 instead of reducing to the M/M/1
// value. kCorrected restores homogeneity:
//   Xi1: (3 mu_t - 2 beta xi) / chi_l      -> (3 mu_l - 2 (1-beta) xi) / (mu_l chi_l)
//        - 2 (1-beta)^2 / mu_l^3           -> - 2 (1-beta)^2 xi / mu_l^3
//   Xi2: (3 mu_t - 2 beta xi) / (mu_t chi_t) -> (3 mu_t - 2 beta xi) / (mu_t^2 chi_t)
// With these, both pure-scheme limits are recovered exactly and the result
// tracks the replicate-mode simulator to within about 1%.
enum class XiForm { kCorrected, kLiteral };

enum class Scheme { kLocal, kRemote, kPartial };

const char* to_string(Scheme s);
const char* to_string(XiForm f);

struct MaoiReport {
  Scheme scheme = Scheme::kPartial;
  double maoi = 0.0;
  std::optional<std::array<double, 5>> xi_terms;  // partial scheme only
  double p_local_dominates = 0.0;
  double p_remote_dominates = 0.0;
  std::optional<Coefficients> coefficients;  // partial scheme only
};

// |mu_t - mu_e| below this fraction of max(mu_t, mu_e) is treated as singular.
inline constexpr double kSingularGap = 1e-9;
// Relative perturbation applied to mu_e by maoi_partial_with_fallback.
inline constexpr double kSingularPerturbation = 1e-6;

// Requires 0 < beta < 1 and strict stability:
// (1-beta) xi < mu_l (C2), beta xi < mu_t (C3), beta xi < mu_e (C4).
Coefficients coefficients(const JacksonRates& r, double xi, double beta);

// P(T^l > T^{t,e}) = chi_t chi_e / (omega_t omega_e).
double prob_local_dominates(const Coefficients& c);
double prob_remote_dominates(const Coefficients& c);

double xi1(const Coefficients& c, const JacksonRates& r, double xi, double beta,
           XiForm form = XiForm::kCorrected);
double xi2(const Coefficients& c, const JacksonRates& r, double xi, double beta,
           XiForm form = XiForm::kCorrected);
double xi3(const Coefficients& c, const JacksonRates& r, double xi, double beta);
double xi4(const Coefficients& c, const JacksonRates& r, double xi, double beta);
double xi5(const Coefficients& c, const JacksonRates& r, double xi, double beta);

MaoiReport maoi_partial(const JacksonRates& r, double xi, double beta,
                        XiForm form = XiForm::kCorrected);

// Retries once with mu_e scaled by (1 + kSingularPerturbation) when the
// mu_t = mu_e singularity is hit; a second failure propagates.
MaoiReport maoi_partial_with_fallback(const JacksonRates& r, double xi, double beta,
                                      XiForm form = XiForm::kCorrected);

// M/M/1 FCFS: xi^2 / (mu^2 (mu - xi)) + 1/mu + 1/xi.
MaoiReport maoi_local(double mu_l, double xi);

// FCFS transmit -> edge tandem.
MaoiReport maoi_remote(double mu_t, double mu_e, double xi);

// Dispatches on beta: 0 -> local, 1 -> remote, otherwise partial (with the
// singular fallback).
MaoiReport maoi_for(const ServiceRates& rates, double xi,
                    XiForm form = XiForm::kCorrected);

}  // namespace aoimec
