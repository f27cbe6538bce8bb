// aoi-mec: command-line front end over the C interface.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>

#include "aoimec/aoimec.h"

namespace {

// 0 ok, 2 config, 3 infeasible or unstable, 4 singular after fallback, 1 other.
int exit_code(aoimec_status s) {
  switch (s) {
    case AOIMEC_OK: return 0;
    case AOIMEC_ERR_CONFIG: return 2;
    case AOIMEC_ERR_INFEASIBLE:
    case AOIMEC_ERR_INSTABILITY: return 3;
    case AOIMEC_ERR_SINGULARITY: return 4;
    default: return 1;
  }
}

int fail(aoimec_status s) {
  std::fprintf(stderr, "aoi-mec: %s: %s\n", aoimec_status_string(s), aoimec_last_error());
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean age of information for partial-offloading MEC networks"};
  app.set_version_flag("--version", std::string(aoimec_version()));

  std::string experiment;
  std::string config;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string stp_source;

  app.add_option("experiment", experiment,
                 std::string("one of: ") + aoimec_experiment_names())
      ->required();
  app.add_option("--config", config, "YAML experiment config (baseline parameters when omitted)");
  auto* out_opt = app.add_option("--out", out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
  app.add_option("--stp-source", stp_source, "closed_form | monte_carlo | auto")
      ->check(CLI::IsMember({"closed_form", "monte_carlo", "auto"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  aoimec_experiment* exp = nullptr;
  aoimec_status s = config.empty() ? aoimec_experiment_defaults(&exp)
                                   : aoimec_experiment_load(config.c_str(), &exp);
  if (s != AOIMEC_OK) return fail(s);

  if (*seed_opt && (s = aoimec_experiment_set_seed(exp, seed)) != AOIMEC_OK) {
    aoimec_experiment_free(exp);
    return fail(s);
  }
  if (!stp_source.empty() &&
      (s = aoimec_experiment_set_stp_source(exp, stp_source.c_str())) != AOIMEC_OK) {
    aoimec_experiment_free(exp);
    return fail(s);
  }
  if (*out_opt && (s = aoimec_experiment_set_output_dir(exp, out_dir.c_str())) != AOIMEC_OK) {
    aoimec_experiment_free(exp);
    return fail(s);
  }

  char path[4096];
  s = aoimec_experiment_run(exp, experiment.c_str(), path, sizeof path);
  aoimec_experiment_free(exp);
  if (s != AOIMEC_OK) return fail(s);
  std::printf("%s\n", path);
  return 0;
}
