#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aoimec/rates.hpp"

namespace aoimec {

// kReplicate: every task enters both the local queue and the transmit queue,
// completion is the later of the two finishes.
// kThin: each task goes local with probability 1 - beta, otherwise to
// transmit -> edge; completion is that single branch.
enum class SplitMode { kReplicate, kThin };

const char* to_string(SplitMode m);

struct SimConfig {
  std::size_t n_tasks = 100000;
  double warmup_fraction = 0.1;
  std::uint64_t seed = 1;
  SplitMode split_mode = SplitMode::kReplicate;
  JacksonRates rates;
  double xi = 0.2;
  double beta = 0.4;

  void validate() const;
};

struct TaskRecord {
  double gen_time = 0.0;
  std::optional<double> local_done;
  std::optional<double> edge_done;
  double complete_time = 0.0;
  double system_time_max = 0.0;
  double interarrival = 0.0;
  std::optional<double> local_service;
};

struct QueueStats {
  std::string name;
  std::size_t arrivals = 0;
  std::size_t departures = 0;
  double span = 0.0;                // first arrival to last departure
  double arrival_rate = 0.0;        // arrivals / span
  double departure_rate = 0.0;      // departures / span
  double mean_in_system = 0.0;      // time average over span
  double mean_system_time = 0.0;    // per customer
  double busy_on_arrival = 0.0;     // fraction of arrivals finding a non-empty system
  double utilization = 0.0;         // fraction of span with the server busy
};

// Estimates mirroring the closed-form intermediates. Fields that need both
// branches on the same task are absent in thin mode.
struct EmpiricalConditionals {
  std::size_t samples = 0;
  std::optional<double> p_local_dominates;
  std::optional<double> p_remote_dominates;
  std::optional<double> e_a_t_local;   // E[A T^l | local dominates]
  std::optional<double> e_a_t_remote;  // E[A T^te | remote dominates]
  double e_a = 0.0;
  double e_a2 = 0.0;
  double e_a_stderr = 0.0;
  double e_a2_stderr = 0.0;
  std::optional<double> p_prev_local_busy;  // T^l_{n-1} > A^l_n on the local branch
  std::optional<double> p_y_positive;       // T^te_n > S^l_n
};

struct SawtoothStats {
  double maoi_hat = 0.0;
  double area = 0.0;
  double duration = 0.0;
  double stderr = 0.0;          // batch means
  std::size_t batches = 0;
  std::size_t informative = 0;  // completions that reset the age
  std::size_t stale = 0;        // completions that did not
  double maoi_renewal = 0.0;    // sum(A^2/2 + A T) / sum(A)
  std::optional<EmpiricalConditionals> conditionals;
  std::vector<QueueStats> queues;
};

struct SimResult {
  std::vector<TaskRecord> records;
  SawtoothStats stats;
};

inline constexpr std::size_t kBatchCount = 32;

SimResult simulate_partial(const SimConfig& cfg);
SawtoothStats simulate_mm1(double mu, double xi, const SimConfig& cfg);
SawtoothStats simulate_tandem(double mu_t, double mu_e, double xi,
                              const SimConfig& cfg);

// Independent replications with seeds derive_seed(cfg.seed, r), run in
// parallel and merged weighting by observation span. Records are dropped.
SawtoothStats simulate_partial_replicated(const SimConfig& cfg, std::size_t reps,
                                          unsigned threads = 0);

// Exact time integral of the age process. The age starts at 0 at t = 0 when
// warmup_fraction is 0; otherwise the window opens at the first completion of
// a task at or beyond the warmup index. It closes at the last completion that
// reset the age. Stale completions (older than something already delivered)
// leave the age untouched. Throws on unsorted gen_time.
SawtoothStats sawtooth_maoi(const std::vector<TaskRecord>& records,
                            double warmup_fraction = 0.0);

// Trapezoid decomposition for a trace whose completions are in generation
// order: Q1 = (t1+T1)^2/2 - T1^2/2, Qn = An^2/2 + An Tn, closing triangle
// Tz^2/2. Throws if any completion is out of order.
struct SawtoothPieces {
  double q_first = 0.0;
  std::vector<double> q_interior;  // n = 2..z
  double q_last = 0.0;
  double total = 0.0;
  double duration = 0.0;  // t_z'
};
SawtoothPieces sawtooth_pieces(const std::vector<TaskRecord>& records);

// Throws InsufficientSamplesError below min_samples post-warmup tasks.
EmpiricalConditionals empirical_conditionals(const std::vector<TaskRecord>& records,
                                             double warmup_fraction = 0.1,
                                             std::size_t min_samples = 10000);

void write_trace_csv(std::ostream& os, const std::vector<TaskRecord>& records);

}  // namespace aoimec
