#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "aoimec/appendix.hpp"

using namespace aoimec;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

struct Running {
  double n = 0, sum = 0, sq = 0;
  void add(double v) { n += 1, sum += v, sq += v * v; }
  double mean() const { return sum / n; }
  double se() const { return std::sqrt((sq / n - mean() * mean()) / n); }
};

// Draws the stationary ingredients independently: local service S and wait W
// (atom 1 - rho at zero, else Exp(chi_l)), transmit and edge sojourns, and a
// local interarrival A against the previous local sojourn.
struct Sampler {
  std::mt19937_64 gen;
  std::exponential_distribution<double> s, w, tt, te, a, tprev;
  std::uniform_real_distribution<double> u{0.0, 1.0};
  double rho;
  Sampler(const JacksonRates& r, double xi, double beta, std::uint64_t seed)
      : gen(seed),
        s(r.mu_l),
        w(r.mu_l - (1 - beta) * xi),
        tt(r.mu_t - beta * xi),
        te(r.mu_e - beta * xi),
        a((1 - beta) * xi),
        tprev(r.mu_l - (1 - beta) * xi),
        rho((1 - beta) * xi / r.mu_l) {}
  double wait() { return u(gen) < rho ? w(gen) : 0.0; }
};

const JacksonRates kTable{0.925926, 1.424812, 3.125};

}  // namespace

TEST_CASE("closed forms at the baseline") {
  const AppendixOracles o = appendix_oracles(kTable, 0.2, 0.4);
  CHECK(o.p_prev_local_busy == doctest::Approx(0.6 * 0.2 / 0.925926));
  CHECK(o.p_prev_local_busy == doctest::Approx(o.coeff.rho_l));
  CHECK(o.e_interarrival_given_busy == doctest::Approx(1 / 0.925926));
  CHECK(o.p_y_positive + o.p_y_negative == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(o.p_local_dominates + o.p_remote_dominates == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(o.wait_atom_mass == doctest::Approx(1 - o.coeff.rho_l));
  CHECK(std::isfinite(o.e_product_given_busy_y_positive_literal));
}

TEST_CASE("densities normalize") {
  const AppendixOracles o = appendix_oracles(kTable, 0.2, 0.4);
  CHECK(integrate(o.density_local_system_time, 0, kInf) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(integrate(o.density_remote_system_time, 0, kInf) == doctest::Approx(1.0).epsilon(1e-9));
  const double y_pos = integrate(o.density_y, 0, kInf);
  const double y_neg = integrate(o.density_y, -kInf, 0);
  CHECK(y_pos + y_neg == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(y_pos == doctest::Approx(o.p_y_positive).epsilon(1e-9));
  const double x_tot = integrate(o.density_x, -kInf, 0) + integrate(o.density_x, 0, kInf);
  CHECK(x_tot == doctest::Approx(1.0).epsilon(1e-9));
  const double x_lit = integrate(o.density_x_literal, -kInf, 0) +
                       integrate(o.density_x_literal, 0, kInf);
  CHECK(std::abs(x_lit - 1.0) > 1e-2);
  CHECK(integrate(o.density_wait_continuous, 0, kInf) + o.wait_atom_mass ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("closed forms agree with sampling at random operating points") {
  std::mt19937_64 pick(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int points = 0;
  while (points < 5) {
    const double beta = 0.1 + 0.8 * u(pick);
    const JacksonRates r{0.3 + 3 * u(pick), 0.3 + 3 * u(pick), 0.3 + 3 * u(pick)};
    const double xi = 0.1 + 1.5 * u(pick);
    if ((1 - beta) * xi >= 0.9 * r.mu_l || beta * xi >= 0.9 * r.mu_t ||
        beta * xi >= 0.9 * r.mu_e || std::abs(r.mu_t - r.mu_e) < 0.05)
      continue;
    ++points;
    const AppendixOracles o = appendix_oracles(r, xi, beta);
    Sampler smp(r, xi, beta, 100 + points);

    Running local, busy, y_pos, s_given_local, a_busy, a_idle, prod_busy, x_pos;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      const double s = smp.s(smp.gen), w = smp.wait();
      const double tte = smp.tt(smp.gen) + smp.te(smp.gen);
      const bool el = s + w > tte;
      local.add(el);
      if (el) s_given_local.add(s);
      y_pos.add(tte - s > 0);
      x_pos.add(tte - w > 0);
      const double a = smp.a(smp.gen), tp = smp.tprev(smp.gen);
      busy.add(tp > a);
      if (tp > a) {
        a_busy.add(a);
        prod_busy.add(a * tp);
      } else {
        a_idle.add(a);
      }
    }
    CAPTURE(points);
    CHECK(std::abs(local.mean() - o.p_local_dominates) < 3 * local.se());
    CHECK(std::abs(busy.mean() - o.p_prev_local_busy) < 3 * busy.se());
    CHECK(std::abs(y_pos.mean() - o.p_y_positive) < 3 * y_pos.se());
    CHECK(std::abs(s_given_local.mean() - o.e_service_given_local) < 3 * s_given_local.se());
    CHECK(std::abs(a_busy.mean() - o.e_interarrival_given_busy) < 3 * a_busy.se());
    CHECK(std::abs(a_idle.mean() - o.e_interarrival_given_idle) < 3 * a_idle.se());
    CHECK(std::abs(prod_busy.mean() - o.e_product_given_busy) < 3 * prod_busy.se());
    // P(X > 0) from the normalized density.
    CHECK(std::abs(x_pos.mean() - integrate(o.density_x, 0, kInf)) < 3 * x_pos.se());
  }
}
