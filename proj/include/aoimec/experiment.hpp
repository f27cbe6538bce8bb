#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aoimec/analytic.hpp"
#include "aoimec/optimizer.hpp"
#include "aoimec/rates.hpp"
#include "aoimec/sim.hpp"
#include "aoimec/stp.hpp"

namespace aoimec {

// auto: closed form when epsilon = 1, Monte Carlo otherwise.
enum class StpSource { kAuto, kClosedForm, kMonteCarlo };

const char* to_string(StpSource s);
StpSource parse_stp_source(const std::string& s);  // throws InvalidArgumentError

struct SweepAxis {
  std::string variable;  // tau_db, beta, xi, n_ues, f_ue, mean_size_bits
  double start = 0.0;
  double stop = 0.0;
  int points = 1;
  bool db_scale = false;  // points evenly spaced in 10 log10(value)

  std::vector<double> values() const;
};

struct ExperimentConfig {
  double tau_db = 0.0;
  RadioConfig radio;  // radio.tau_linear is derived from tau_db
  TaskProfile task;
  PlatformProfile plat;

  StpSource stp_source = StpSource::kAuto;
  McStpConfig mc;

  bool sim_enabled = true;
  bool sim_trace = false;
  SimConfig sim;  // rates, xi, beta filled per point

  OptConfig opt;
  XiForm xi_form = XiForm::kCorrected;

  std::vector<SweepAxis> sweep;
  std::vector<double> series;  // secondary values for figure experiments
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  unsigned threads = 0;

  // Baseline parameter set.
  static ExperimentConfig defaults();
  void set_seed(std::uint64_t s);
  void apply(const std::string& variable, double value);
};

// Throws ConfigError carrying the line number and key.
ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig load_config_string(const std::string& text);

using Cell = std::variant<std::monostate, double, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentOutput {
  std::string name;
  ResultTable table;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, std::vector<TaskRecord>>> traces;
};

// Resolves the STP for a given threshold. Monte Carlo SIR samples do not
// depend on the threshold, so one batch serves every tau of an experiment.
class ThetaSource {
 public:
  explicit ThetaSource(const ExperimentConfig& cfg);
  double theta(double tau_linear) const;
  double closed_form(double tau_linear) const;
  std::optional<double> monte_carlo(double tau_linear) const;
  std::optional<double> monte_carlo_ci(double tau_linear) const;
  bool uses_monte_carlo() const { return use_mc_; }

 private:
  RadioConfig radio_;
  bool use_mc_ = false;
  std::optional<McStpResult> mc_;
};

const std::vector<std::string>& experiment_names();

// Names: fig3 fig4 fig5 fig6 fig7 fig8 sweep optimize stp sim.
ExperimentOutput run_experiment(const std::string& name, const ExperimentConfig& cfg);

// Comma separated, header row, '\n' endings, %.10g, empty cell when absent.
void write_csv(std::ostream& os, const ResultTable& table);

// Writes <dir>/<name>.csv, <dir>/<name>.manifest.json and any traces.
// Returns the csv path.
std::string write_outputs(const ExperimentOutput& out, const ExperimentConfig& cfg,
                          const std::string& dir, double wall_seconds);

std::string library_version();

}  // namespace aoimec
