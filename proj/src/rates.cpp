#include "aoimec/rates.hpp"

#include <cmath>
#include <string>

#include "aoimec/error.hpp"

namespace aoimec {

void TaskProfile::validate() const {
  if (!(mean_size_bits > 0.0)) throw InvalidArgumentError("task size must be > 0");
  if (!(cycles_per_bit > 0.0)) throw InvalidArgumentError("cycles per bit must be > 0");
  if (!(tgr > 0.0)) throw InvalidArgumentError("task generation rate must be > 0");
  if (!(cor >= 0.0 && cor <= 1.0))
    throw InvalidArgumentError("offloading ratio must lie in [0, 1]");
}

void PlatformProfile::validate() const {
  if (!(ue_cpu_hz > 0.0)) throw InvalidArgumentError("UE CPU frequency must be > 0");
  if (!(bs_cpu_hz > 0.0)) throw InvalidArgumentError("BS CPU frequency must be > 0");
  if (ues_per_bs < 1) throw InvalidArgumentError("UEs per BS must be >= 1");
  if (!(total_bandwidth_hz > 0.0)) throw InvalidArgumentError("bandwidth must be > 0");
}

JacksonRates ServiceRates::partial() const {
  if (!is_partial())
    throw InvalidArgumentError(
        "a strictly partial configuration (0 < beta < 1) is required, got beta = " +
        std::to_string(beta));
  return {*mu_l, *mu_t, *mu_e};
}

double local_delay(const TaskProfile& task, const PlatformProfile& plat) {
  task.validate();
  plat.validate();
  return task.cycles_per_bit * task.mean_size_bits / plat.ue_cpu_hz;
}

double offload_delay(const TaskProfile& task, const PlatformProfile& plat,
                     double tau_linear, double theta) {
  task.validate();
  plat.validate();
  if (!(theta > 0.0 && theta <= 1.0))
    throw DomainError("transmission success probability must lie in (0, 1], got " +
                      std::to_string(theta));
  const double spectral = std::log2(1.0 + tau_linear);
  if (!(spectral > 0.0)) throw DomainError("log2(1 + tau) must be positive");
  return task.mean_size_bits / (plat.per_ue_bandwidth_hz() * spectral * theta);
}

double edge_delay(const TaskProfile& task, const PlatformProfile& plat) {
  task.validate();
  plat.validate();
  return task.cycles_per_bit * task.mean_size_bits / plat.per_ue_compute_hz();
}

ServiceRates service_rates(const TaskProfile& task, const PlatformProfile& plat,
                           double tau_linear, double theta) {
  ServiceRates r;
  r.g_delay = local_delay(task, plat);
  r.k_delay = offload_delay(task, plat, tau_linear, theta);
  r.h_delay = edge_delay(task, plat);
  r.beta = task.cor;
  r.theta_used = theta;
  const double b = task.cor;
  if (b == 0.0) {
    r.mu_l = 1.0 / r.g_delay;
  } else if (b == 1.0) {
    r.mu_t = 1.0 / r.k_delay;
    r.mu_e = 1.0 / r.h_delay;
  } else {
    r.mu_l = 1.0 / ((1.0 - b) * r.g_delay);
    r.mu_t = 1.0 / (b * r.k_delay);
    r.mu_e = 1.0 / (b * r.h_delay);
  }
  return r;
}

}  // namespace aoimec
