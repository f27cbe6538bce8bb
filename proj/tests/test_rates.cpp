#include <doctest.h>

#include <random>

#include "aoimec/error.hpp"
#include "aoimec/rates.hpp"

using namespace aoimec;

TEST_CASE("delays at the baseline") {
  TaskProfile t;
  PlatformProfile p;
  CHECK(local_delay(t, p) == doctest::Approx(1.8).epsilon(1e-14));
  CHECK(edge_delay(t, p) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(offload_delay(t, p, 1.0, 0.45594) ==
        doctest::Approx(2e6 / (2.5e6 * 0.45594)).epsilon(1e-14));
  CHECK(offload_delay(t, p, 1.0, 0.45594) == doctest::Approx(1.7547).epsilon(1e-4));

  t.mean_size_bits = 3e6;
  CHECK(local_delay(t, p) == doctest::Approx(2.7).epsilon(1e-14));
  CHECK(edge_delay(t, p) == doctest::Approx(1.2).epsilon(1e-14));
}

TEST_CASE("delay scaling") {
  TaskProfile t;
  PlatformProfile p;
  const double g = local_delay(t, p);
  const double k = offload_delay(t, p, 1.0, 0.5);
  p.ue_cpu_hz *= 2;
  CHECK(local_delay(t, p) == doctest::Approx(g / 2));
  p = PlatformProfile{};
  p.ues_per_bs *= 2;
  CHECK(offload_delay(t, p, 1.0, 0.5) == doctest::Approx(2 * k));
  p = PlatformProfile{};
  p.ues_per_bs = 1;
  CHECK(edge_delay(t, p) == doctest::Approx(900 * 2e6 / 45e9));
  CHECK(offload_delay(TaskProfile{}, PlatformProfile{}, 1.0, 1.0) ==
        doctest::Approx(2e6 / 2.5e6));
}

TEST_CASE("offload delay guards") {
  TaskProfile t;
  PlatformProfile p;
  CHECK_THROWS_AS(offload_delay(t, p, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(offload_delay(t, p, 1.0, 1.2), DomainError);
  CHECK_THROWS_AS(offload_delay(t, p, 0.0, 0.5), DomainError);
}

TEST_CASE("service rates at the baseline") {
  TaskProfile t;
  PlatformProfile p;
  const ServiceRates r = service_rates(t, p, 1.0, 0.45594);
  REQUIRE(r.is_partial());
  CHECK(*r.mu_l == doctest::Approx(0.92593).epsilon(1e-5));
  CHECK(*r.mu_t == doctest::Approx(1.42475).epsilon(1e-4));
  CHECK(*r.mu_e == doctest::Approx(3.125).epsilon(1e-12));
  CHECK(r.theta_used == 0.45594);
}

TEST_CASE("pure schemes mark the idle branch absent") {
  TaskProfile t;
  PlatformProfile p;
  t.cor = 0.0;
  ServiceRates r = service_rates(t, p, 1.0, 0.5);
  CHECK(r.mu_l.has_value());
  CHECK_FALSE(r.mu_t.has_value());
  CHECK_FALSE(r.mu_e.has_value());
  CHECK(*r.mu_l == doctest::Approx(1 / 1.8));
  CHECK_THROWS_AS(r.partial(), InvalidArgumentError);
  t.cor = 1.0;
  r = service_rates(t, p, 1.0, 0.5);
  CHECK_FALSE(r.mu_l.has_value());
  CHECK(*r.mu_e == doctest::Approx(1.25));
  CHECK_THROWS_AS(r.partial(), InvalidArgumentError);
}

TEST_CASE("symmetric delays give equal rates at half split") {
  TaskProfile t;
  PlatformProfile p;
  t.cor = 0.5;
  // G = K = H: choose f = B/N log2(1+tau) theta C and f^B/N = f.
  p.ue_cpu_hz = 1e9;
  p.ues_per_bs = 1;
  p.bs_cpu_hz = 1e9;
  p.total_bandwidth_hz = 1e9 / 900.0;
  const ServiceRates r = service_rates(t, p, 1.0, 1.0);
  CHECK(*r.mu_l == doctest::Approx(*r.mu_t).epsilon(1e-12));
  CHECK(*r.mu_t == doctest::Approx(*r.mu_e).epsilon(1e-12));
}

TEST_CASE("rate identities and C2 bookkeeping on a random grid") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    TaskProfile t;
    PlatformProfile p;
    t.cor = 0.01 + 0.98 * u(gen);
    t.mean_size_bits = 1e5 + 5e6 * u(gen);
    t.cycles_per_bit = 100 + 2000 * u(gen);
    p.ue_cpu_hz = 1e8 + 3e9 * u(gen);
    p.ues_per_bs = 1 + static_cast<int>(50 * u(gen));
    const double theta = 0.05 + 0.95 * u(gen);
    const double tau = 0.1 + 10 * u(gen);
    const ServiceRates r = service_rates(t, p, tau, theta);
    const double b = t.cor;
    CHECK(*r.mu_l * (1 - b) * r.g_delay == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*r.mu_t * b * r.k_delay == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*r.mu_e * b * r.h_delay == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.g_delay > 0);
    CHECK(r.k_delay > 0);
    CHECK(r.h_delay > 0);
    const double xi = 3.0 * u(gen);
    CHECK(((1 - b) * xi < *r.mu_l) == ((1 - b) * (1 - b) * xi * r.g_delay < 1.0));
  }
}
