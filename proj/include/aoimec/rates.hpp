#pragma once

#include <optional>

namespace aoimec {

// Units project-wide: bits, Hz (cycles/s for CPUs), seconds, tasks/s.

struct TaskProfile {
  double mean_size_bits = 2e6;  // L
  double cycles_per_bit = 900;  // C
  double tgr = 0.2;             // task generation rate xi
  double cor = 0.4;             // computing offloading ratio beta

  void validate() const;
};

struct PlatformProfile {
  double ue_cpu_hz = 1e9;            // f
  double bs_cpu_hz = 45e9;           // f^B
  int ues_per_bs = 20;               // N
  double total_bandwidth_hz = 50e6;  // B_tot

  void validate() const;
  // Equal split of BS compute and bandwidth across the cell's UEs.
  double per_ue_compute_hz() const { return bs_cpu_hz / ues_per_bs; }
  double per_ue_bandwidth_hz() const { return total_bandwidth_hz / ues_per_bs; }
};

// Service rates of the local queue and of the transmit -> edge tandem.
struct JacksonRates {
  double mu_l = 0.0;
  double mu_t = 0.0;
  double mu_e = 0.0;
};

struct ServiceRates {
  double g_delay = 0.0;  // mean local service delay G
  double k_delay = 0.0;  // mean offloading delay K
  double h_delay = 0.0;  // mean edge service delay H
  double beta = 0.0;
  // Absent when the corresponding branch carries no traffic (beta = 0 or 1).
  std::optional<double> mu_l;
  std::optional<double> mu_t;
  std::optional<double> mu_e;
  double theta_used = 0.0;

  bool is_partial() const { return mu_l && mu_t && mu_e; }
  // Throws InvalidArgumentError unless 0 < beta < 1.
  JacksonRates partial() const;
};

double local_delay(const TaskProfile& task, const PlatformProfile& plat);
double offload_delay(const TaskProfile& task, const PlatformProfile& plat,
                     double tau_linear, double theta);
double edge_delay(const TaskProfile& task, const PlatformProfile& plat);

// beta = task.cor. For 0 < beta < 1: mu_l = 1/((1-beta)G), mu_t = 1/(beta K),
// mu_e = 1/(beta H). beta = 0 yields only mu_l = 1/G; beta = 1 yields only
// mu_t = 1/K and mu_e = 1/H.
ServiceRates service_rates(const TaskProfile& task, const PlatformProfile& plat,
                           double tau_linear, double theta);

}  // namespace aoimec
