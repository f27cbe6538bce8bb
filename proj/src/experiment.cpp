#include "aoimec/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "aoimec/error.hpp"
#include "aoimec/parallel.hpp"
#include "aoimec/rng.hpp"

#ifndef AOIMEC_VERSION
#define AOIMEC_VERSION "0.0.0"
#endif

namespace aoimec {

std::string library_version() { return AOIMEC_VERSION; }

const char* to_string(StpSource s) {
  switch (s) {
    case StpSource::kAuto: return "auto";
    case StpSource::kClosedForm: return "closed_form";
    case StpSource::kMonteCarlo: return "monte_carlo";
  }
  return "?";
}

StpSource parse_stp_source(const std::string& s) {
  if (s == "auto") return StpSource::kAuto;
  if (s == "closed_form") return StpSource::kClosedForm;
  if (s == "monte_carlo") return StpSource::kMonteCarlo;
  throw InvalidArgumentError("unknown stp source '" + s +
                             "' (expected auto, closed_form or monte_carlo)");
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> v;
  if (points <= 1) {
    v.push_back(start);
    return v;
  }
  for (int i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / (points - 1);
    if (db_scale) {
      const double a = linear_to_db(start), b = linear_to_db(stop);
      v.push_back(db_to_linear(a + (b - a) * u));
    } else {
      v.push_back(start + (stop - start) * u);
    }
  }
  v.back() = stop;
  return v;
}

namespace {

const std::set<std::string>& sweepable() {
  static const std::set<std::string> s{"tau_db", "beta", "xi", "n_ues", "f_ue",
                                       "mean_size_bits"};
  return s;
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.tau_db = 0.0;
  c.radio.tau_linear = db_to_linear(0.0);
  c.radio.alpha = 4.0;
  c.radio.epsilon = 0.5;
  c.radio.lambda_b = 1e-4;
  c.set_seed(1);
  return c;
}

void ExperimentConfig::set_seed(std::uint64_t s) {
  seed = s;
  mc.seed = derive_seed(s, 0x5354);
  sim.seed = derive_seed(s, 0x53494d);
}

void ExperimentConfig::apply(const std::string& variable, double value) {
  if (variable == "tau_db") {
    tau_db = value;
    radio.tau_linear = db_to_linear(value);
  } else if (variable == "beta") {
    task.cor = value;
  } else if (variable == "xi") {
    task.tgr = value;
  } else if (variable == "n_ues") {
    plat.ues_per_bs = static_cast<int>(std::lround(value));
  } else if (variable == "f_ue") {
    plat.ue_cpu_hz = value;
  } else if (variable == "mean_size_bits") {
    task.mean_size_bits = value;
  } else {
    throw InvalidArgumentError("variable '" + variable + "' is not sweepable");
  }
}

// ---------------------------------------------------------------- config

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

void check_map(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) throw ConfigError(line_of(n), where, "expected a mapping");
}

void check_keys(const YAML::Node& n, const std::string& where,
                const std::set<std::string>& allowed) {
  check_map(n, where);
  for (const auto& kv : n) {
    const std::string k = kv.first.as<std::string>();
    if (!allowed.count(k)) {
      const std::string full = where.empty() ? k : where + "." + k;
      throw ConfigError(line_of(kv.first), full, "unknown key");
    }
  }
}

template <class T>
void read(const YAML::Node& parent, const char* key, const std::string& where, T& out) {
  const YAML::Node n = parent[key];
  if (!n) return;
  const std::string full = where.empty() ? key : where + "." + key;
  try {
    out = n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(line_of(n), full, "cannot convert value");
  }
}

template <class F>
void guarded(const YAML::Node& n, const std::string& key, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(line_of(n), key, e.what());
  }
}

ExperimentConfig parse(const YAML::Node& root) {
  ExperimentConfig c = ExperimentConfig::defaults();
  if (!root || root.IsNull()) return c;
  check_keys(root, "", {"seed", "output", "threads", "radio", "task", "platform", "stp",
                        "sim", "opt", "analysis", "sweep", "series"});

  std::uint64_t seed = c.seed;
  read(root, "seed", "", seed);
  c.set_seed(seed);
  read(root, "output", "", c.output_dir);
  read(root, "threads", "", c.threads);

  if (const YAML::Node r = root["radio"]) {
    check_keys(r, "radio", {"tau_db", "alpha", "epsilon", "lambda_b", "p_tx"});
    read(r, "tau_db", "radio", c.tau_db);
    read(r, "alpha", "radio", c.radio.alpha);
    read(r, "epsilon", "radio", c.radio.epsilon);
    read(r, "lambda_b", "radio", c.radio.lambda_b);
    read(r, "p_tx", "radio", c.radio.p_tx);
    c.radio.tau_linear = db_to_linear(c.tau_db);
    guarded(r, "radio", [&] { c.radio.validate(); });
  }
  if (const YAML::Node t = root["task"]) {
    check_keys(t, "task", {"mean_size_bits", "cycles_per_bit", "tgr", "cor"});
    read(t, "mean_size_bits", "task", c.task.mean_size_bits);
    read(t, "cycles_per_bit", "task", c.task.cycles_per_bit);
    read(t, "tgr", "task", c.task.tgr);
    read(t, "cor", "task", c.task.cor);
    guarded(t, "task", [&] { c.task.validate(); });
  }
  if (const YAML::Node p = root["platform"]) {
    check_keys(p, "platform", {"ue_cpu_hz", "bs_cpu_hz", "ues_per_bs", "total_bandwidth_hz"});
    read(p, "ue_cpu_hz", "platform", c.plat.ue_cpu_hz);
    read(p, "bs_cpu_hz", "platform", c.plat.bs_cpu_hz);
    read(p, "ues_per_bs", "platform", c.plat.ues_per_bs);
    read(p, "total_bandwidth_hz", "platform", c.plat.total_bandwidth_hz);
    guarded(p, "platform", [&] { c.plat.validate(); });
  }
  if (const YAML::Node s = root["stp"]) {
    check_keys(s, "stp", {"source", "iterations", "window_radius_factor"});
    std::string src = to_string(c.stp_source);
    read(s, "source", "stp", src);
    guarded(s["source"] ? s["source"] : s, "stp.source",
            [&] { c.stp_source = parse_stp_source(src); });
    read(s, "iterations", "stp", c.mc.iterations);
    read(s, "window_radius_factor", "stp", c.mc.window_radius_factor);
    guarded(s, "stp", [&] { c.mc.validate(); });
  }
  if (const YAML::Node s = root["sim"]) {
    check_keys(s, "sim", {"enabled", "n_tasks", "warmup_fraction", "split_mode", "trace"});
    read(s, "enabled", "sim", c.sim_enabled);
    read(s, "trace", "sim", c.sim_trace);
    read(s, "n_tasks", "sim", c.sim.n_tasks);
    read(s, "warmup_fraction", "sim", c.sim.warmup_fraction);
    if (const YAML::Node m = s["split_mode"]) {
      const std::string v = m.as<std::string>();
      if (v == "replicate")
        c.sim.split_mode = SplitMode::kReplicate;
      else if (v == "thin")
        c.sim.split_mode = SplitMode::kThin;
      else
        throw ConfigError(line_of(m), "sim.split_mode", "expected replicate or thin");
    }
    guarded(s, "sim", [&] { c.sim.validate(); });
  }
  if (const YAML::Node o = root["opt"]) {
    check_keys(o, "opt", {"beta_lo", "beta_hi", "xi_lo", "xi_hi", "stability_margin",
                          "coarse_grid", "tolerance", "max_refinements"});
    read(o, "beta_lo", "opt", c.opt.beta_lo);
    read(o, "beta_hi", "opt", c.opt.beta_hi);
    read(o, "xi_lo", "opt", c.opt.xi_lo);
    read(o, "xi_hi", "opt", c.opt.xi_hi);
    read(o, "stability_margin", "opt", c.opt.stability_margin);
    read(o, "coarse_grid", "opt", c.opt.coarse_grid);
    read(o, "tolerance", "opt", c.opt.tolerance);
    read(o, "max_refinements", "opt", c.opt.max_refinements);
    guarded(o, "opt", [&] { c.opt.validate(); });
  }
  if (const YAML::Node a = root["analysis"]) {
    check_keys(a, "analysis", {"xi_form"});
    if (const YAML::Node f = a["xi_form"]) {
      const std::string v = f.as<std::string>();
      if (v == "corrected")
        c.xi_form = XiForm::kCorrected;
      else if (v == "literal")
        c.xi_form = XiForm::kLiteral;
      else
        throw ConfigError(line_of(f), "analysis.xi_form", "expected corrected or literal");
    }
  }
  if (const YAML::Node sw = root["sweep"]) {
    const auto parse_axis = [&](const YAML::Node& ax) {
      check_keys(ax, "sweep", {"variable", "start", "stop", "points", "scale"});
      SweepAxis a;
      if (!ax["variable"]) throw ConfigError(line_of(ax), "sweep.variable", "missing");
      read(ax, "variable", "sweep", a.variable);
      if (!sweepable().count(a.variable))
        throw ConfigError(line_of(ax["variable"]), "sweep.variable",
                          "'" + a.variable + "' is not sweepable");
      read(ax, "start", "sweep", a.start);
      a.stop = a.start;
      read(ax, "stop", "sweep", a.stop);
      read(ax, "points", "sweep", a.points);
      if (a.points < 1) throw ConfigError(line_of(ax), "sweep.points", "must be >= 1");
      std::string scale = "linear";
      read(ax, "scale", "sweep", scale);
      if (scale == "db" || scale == "dB") {
        a.db_scale = true;
        if (!(a.start > 0.0 && a.stop > 0.0))
          throw ConfigError(line_of(ax), "sweep.scale", "dB scale needs positive bounds");
      } else if (scale != "linear") {
        throw ConfigError(line_of(ax), "sweep.scale", "expected linear or dB");
      }
      c.sweep.push_back(a);
    };
    if (sw.IsSequence()) {
      for (const auto& ax : sw) parse_axis(ax);
    } else {
      parse_axis(sw);
    }
  }
  if (const YAML::Node s = root["series"]) {
    if (!s.IsSequence()) throw ConfigError(line_of(s), "series", "expected a list");
    c.series.clear();
    for (const auto& v : s) {
      try {
        c.series.push_back(v.as<double>());
      } catch (const YAML::Exception&) {
        throw ConfigError(line_of(v), "series", "cannot convert value");
      }
    }
  }
  return c;
}

}  // namespace

ExperimentConfig load_config_string(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.mark.line + 1, "", e.msg);
  }
  return parse(root);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config_string(ss.str());
}

// ---------------------------------------------------------------- theta

ThetaSource::ThetaSource(const ExperimentConfig& cfg) : radio_(cfg.radio) {
  switch (cfg.stp_source) {
    case StpSource::kAuto: use_mc_ = cfg.radio.epsilon != 1.0; break;
    case StpSource::kClosedForm: use_mc_ = false; break;
    case StpSource::kMonteCarlo: use_mc_ = true; break;
  }
  if (use_mc_) {
    McStpConfig mc = cfg.mc;
    mc.threads = cfg.threads;
    mc_ = stp_monte_carlo(radio_, mc);
  }
}

double ThetaSource::closed_form(double tau_linear) const {
  RadioConfig r = radio_;
  r.tau_linear = tau_linear;
  return stp_closed_form(r).theta;
}

std::optional<double> ThetaSource::monte_carlo(double tau_linear) const {
  if (!mc_) return std::nullopt;
  return mc_->theta_at(tau_linear);
}

std::optional<double> ThetaSource::monte_carlo_ci(double tau_linear) const {
  if (!mc_) return std::nullopt;
  return mc_->ci_at(tau_linear);
}

double ThetaSource::theta(double tau_linear) const {
  return use_mc_ ? mc_->theta_at(tau_linear) : closed_form(tau_linear);
}

// ---------------------------------------------------------------- helpers

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Cell num(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return std::monostate{};
  return *v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Re-raises e with the sweep coordinate prepended, keeping its kind.
[[noreturn]] void rethrow_at(const Error& e, const std::string& where) {
  const std::string w = where + ": " + e.what();
  switch (e.kind()) {
    case ErrorKind::kInstability:
      throw InstabilityError(static_cast<const InstabilityError&>(e).constraint(), w);
    case ErrorKind::kSingularity:
      throw SingularityError(static_cast<const SingularityError&>(e).denominator(), w);
    case ErrorKind::kInfeasible: throw InfeasibleError(w);
    case ErrorKind::kDomain: throw DomainError(w);
    case ErrorKind::kConfig: throw ConfigError(0, "", w);
    case ErrorKind::kInsufficientSamples: throw InsufficientSamplesError(w);
    case ErrorKind::kIo: throw IoError(w);
    case ErrorKind::kInvalidArgument: break;
  }
  throw InvalidArgumentError(w);
}

// Evaluates rows in parallel, each from its own point index, then returns
// them in order. Errors are tagged with the point's coordinates.
template <class Point, class F>
std::vector<std::vector<Cell>> eval_rows(const std::vector<Point>& pts, unsigned threads,
                                         std::function<std::string(const Point&)> where,
                                         F&& f) {
  std::vector<std::vector<Cell>> rows(pts.size());
  parallel_for(
      pts.size(),
      [&](std::size_t i) {
        try {
          rows[i] = f(pts[i], i);
        } catch (const Error& e) {
          rethrow_at(e, where(pts[i]));
        }
      },
      threads);
  return rows;
}

struct SchemeValues {
  std::optional<double> theta;
  std::optional<double> local;
  std::optional<double> remote;
  std::optional<double> partial;
  std::optional<double> sim;
  std::optional<double> sim_stderr;
};

template <class F>
auto unless_unstable(F&& f) -> std::optional<decltype(f())> {
  try {
    return f();
  } catch (const InstabilityError&) {
    return std::nullopt;
  }
}

// Analytic values at a fully specified point plus, optionally, a simulation.
SchemeValues evaluate_point(const ExperimentConfig& c, const ThetaSource& ts, bool with_sim,
                            std::uint64_t seed) {
  SchemeValues v;
  const double theta = ts.theta(c.radio.tau_linear);
  v.theta = theta;
  const double xi = c.task.tgr;
  const double beta = c.task.cor;
  const double G = local_delay(c.task, c.plat);
  const double K = offload_delay(c.task, c.plat, c.radio.tau_linear, theta);
  const double H = edge_delay(c.task, c.plat);
  v.local = unless_unstable([&] { return maoi_local(1.0 / G, xi).maoi; });
  v.remote = unless_unstable([&] { return maoi_remote(1.0 / K, 1.0 / H, xi).maoi; });
  const ServiceRates r = service_rates(c.task, c.plat, c.radio.tau_linear, theta);
  v.partial = unless_unstable([&] { return maoi_for(r, xi, c.xi_form).maoi; });
  if (!with_sim) return v;

  SimConfig sc = c.sim;
  sc.seed = seed;
  sc.xi = xi;
  sc.beta = beta;
  std::optional<SawtoothStats> st;
  if (beta == 0.0) {
    st = unless_unstable([&] { return simulate_mm1(*r.mu_l, xi, sc); });
  } else if (beta == 1.0) {
    st = unless_unstable([&] { return simulate_tandem(*r.mu_t, *r.mu_e, xi, sc); });
  } else {
    sc.rates = r.partial();
    st = unless_unstable([&] { return simulate_partial(sc).stats; });
  }
  if (st) {
    v.sim = st->maoi_hat;
    v.sim_stderr = st->stderr;
  }
  return v;
}

std::vector<double> axis_or(const ExperimentConfig& c, const std::string& var,
                            std::vector<double> fallback) {
  for (const auto& a : c.sweep)
    if (a.variable == var) return a.values();
  return fallback;
}

std::vector<double> range(double a, double b, int n) {
  SweepAxis ax{"", a, b, n, false};
  return ax.values();
}

std::string label(double v) {
  std::string s = fmt(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

std::optional<double> optimum_or_none(const std::function<OptimumReport()>& f,
                                      OptimumReport* out = nullptr) {
  try {
    OptimumReport r = f();
    if (out) *out = r;
    return r.maoi_star;
  } catch (const InfeasibleError&) {
    return std::nullopt;
  }
}

OptProblem problem_of(const ExperimentConfig& c, double theta) {
  OptProblem p;
  p.task = c.task;
  p.plat = c.plat;
  p.tau_linear = c.radio.tau_linear;
  p.theta = theta;
  return p;
}

OptConfig opt_of(const ExperimentConfig& c) {
  OptConfig o = c.opt;
  o.form = c.xi_form;
  o.threads = 1;  // rows already run in parallel
  return o;
}

void theta_notes(ExperimentOutput& out, const ExperimentConfig& c, const ThetaSource& ts) {
  const double tau = c.radio.tau_linear;
  out.summary.emplace_back("theta_used", ts.theta(tau));
  out.summary.emplace_back("theta_closed_form", ts.closed_form(tau));
  if (auto m = ts.monte_carlo(tau)) {
    out.summary.emplace_back("theta_monte_carlo", *m);
    out.summary.emplace_back("theta_monte_carlo_ci", *ts.monte_carlo_ci(tau));
  }
}

// ---------------------------------------------------------------- experiments

ExperimentOutput run_stp(const ExperimentConfig& c) {
  ExperimentOutput out;
  ExperimentConfig mc_cfg = c;
  mc_cfg.stp_source = StpSource::kMonteCarlo;
  const ThetaSource ts(mc_cfg);
  out.table.columns = {"tau_db", "sigma", "theta_closed_form", "closed_form_valid",
                       "theta_lower_gamma_conjecture", "theta_mc", "mc_ci_halfwidth",
                       "closed_minus_mc_over_ci"};
  for (double db : axis_or(c, "tau_db", range(-10.0, 10.0, 9))) {
    RadioConfig r = c.radio;
    r.tau_linear = db_to_linear(db);
    const StpResult cf = stp_closed_form(r);
    const StpResult lg = stp_closed_form_lower_gamma(r);
    const double mc = *ts.monte_carlo(r.tau_linear);
    const double ci = *ts.monte_carlo_ci(r.tau_linear);
    out.table.rows.push_back({db, cf.sigma, cf.theta, cf.valid ? 1.0 : 0.0, lg.theta, mc, ci,
                              num(ci > 0.0 ? std::optional((cf.theta - mc) / ci)
                                           : std::nullopt)});
  }
  theta_notes(out, c, ts);
  return out;
}

ExperimentOutput run_curve(const ExperimentConfig& c, const std::string& var,
                           std::vector<double> xs) {
  ExperimentOutput out;
  const ThetaSource ts(c);
  out.table.columns = {var,           "theta",          "maoi_local",
                       "maoi_remote", "maoi_partial_analytic", "maoi_partial_sim",
                       "sim_stderr"};
  out.table.rows = eval_rows<double>(
      xs, c.threads, [&](const double& x) { return var + "=" + fmt(x); },
      [&](double x, std::size_t i) {
        ExperimentConfig pc = c;
        pc.apply(var, x);
        const SchemeValues v = evaluate_point(pc, ts, c.sim_enabled, derive_seed(c.sim.seed, i));
        return std::vector<Cell>{x,         num(v.theta),   num(v.local),     num(v.remote),
                                 num(v.partial), num(v.sim), num(v.sim_stderr)};
      });
  theta_notes(out, c, ts);
  return out;
}

ExperimentOutput run_fig5(const ExperimentConfig& c) {
  ExperimentOutput out;
  const ThetaSource ts(c);
  struct P {
    double tau_db, xi, n;
  };
  std::vector<P> pts;
  const auto taus = axis_or(c, "tau_db", {0.0, 5.0});
  const auto xis = c.series.empty() ? std::vector<double>{0.2, 0.5} : c.series;
  const auto ns = axis_or(c, "n_ues", range(10, 40, 7));
  for (double t : taus)
    for (double x : xis)
      for (double n : ns) pts.push_back({t, x, n});
  out.table.columns = {"tau_db", "xi", "n_ues", "theta", "beta_star", "maoi_star",
                       "boundary_flag"};
  out.table.rows = eval_rows<P>(
      pts, c.threads,
      [](const P& p) {
        return "tau_db=" + fmt(p.tau_db) + " xi=" + fmt(p.xi) + " n_ues=" + fmt(p.n);
      },
      [&](const P& p, std::size_t) {
        ExperimentConfig pc = c;
        pc.apply("tau_db", p.tau_db);
        pc.apply("n_ues", p.n);
        const double theta = ts.theta(pc.radio.tau_linear);
        OptimumReport rep;
        const auto v = optimum_or_none(
            [&] { return optimize_beta_given_xi(p.xi, problem_of(pc, theta), opt_of(c)); },
            &rep);
        return std::vector<Cell>{p.tau_db, p.xi, p.n, theta,
                                 num(v ? std::optional(rep.beta_star) : std::nullopt),
                                 num(v), v ? Cell(rep.boundary_flag ? 1.0 : 0.0) : Cell()};
      });
  theta_notes(out, c, ts);
  return out;
}

ExperimentOutput run_fig6(const ExperimentConfig& c) {
  ExperimentOutput out;
  const ThetaSource ts(c);
  const double theta = ts.theta(c.radio.tau_linear);
  const OptProblem prob = problem_of(c, theta);
  const auto betas = c.series.empty() ? std::vector<double>{0.0, 0.3, 0.7, 1.0} : c.series;
  const auto xis = axis_or(c, "xi", range(0.05, 3.0, 60));

  out.table.columns = {"xi"};
  for (double b : betas) out.table.columns.push_back("maoi_beta_" + label(b));
  out.table.columns.push_back("beta_opt");
  out.table.columns.push_back("maoi_beta_opt");
  out.table.rows = eval_rows<double>(
      xis, c.threads, [](const double& x) { return "xi=" + fmt(x); },
      [&](double x, std::size_t) {
        std::vector<Cell> row{x};
        for (double b : betas)
          row.push_back(num(objective(b, x, prob, c.opt.stability_margin, c.xi_form)));
        OptimumReport rep;
        const auto v = optimum_or_none(
            [&] { return optimize_beta_given_xi(x, prob, opt_of(c)); }, &rep);
        row.push_back(num(v ? std::optional(rep.beta_star) : std::nullopt));
        row.push_back(num(v));
        return row;
      });

  // Best partial configuration against the better pure scheme, each at its own
  // optimal TGR.
  OptConfig oc = c.opt;
  oc.form = c.xi_form;
  oc.threads = c.threads;
  const auto local = optimum_or_none([&] { return optimize_xi_given_beta(0.0, prob, oc); });
  const auto remote = optimum_or_none([&] { return optimize_xi_given_beta(1.0, prob, oc); });
  OptimumReport joint;
  const auto best = optimum_or_none([&] { return optimize_joint(prob, oc); }, &joint);
  if (local) out.summary.emplace_back("maoi_local_opt", *local);
  if (remote) out.summary.emplace_back("maoi_remote_opt", *remote);
  if (best) {
    out.summary.emplace_back("maoi_joint_opt", *best);
    out.summary.emplace_back("beta_joint_opt", joint.beta_star);
    out.summary.emplace_back("xi_joint_opt", joint.xi_star);
    const double pure = std::min(local.value_or(INFINITY), remote.value_or(INFINITY));
    if (std::isfinite(pure)) out.summary.emplace_back("reduction_vs_best_pure", 1.0 - *best / pure);
  }
  theta_notes(out, c, ts);
  return out;
}

ExperimentOutput run_fig7(const ExperimentConfig& c) {
  ExperimentOutput out;
  const ThetaSource ts(c);
  const double theta = ts.theta(c.radio.tau_linear);
  const auto ns = axis_or(c, "n_ues", range(5, 40, 8));
  const std::vector<double> betas{0.0, 0.3, 0.6, 1.0};
  const std::vector<double> xis =
      c.series.empty() ? std::vector<double>{0.2, 0.5} : c.series;

  out.table.columns = {"n_ues", "maoi_joint", "beta_joint", "xi_joint"};
  for (double b : betas) out.table.columns.push_back("maoi_xi_opt_beta_" + label(b));
  for (double x : xis) out.table.columns.push_back("maoi_beta_opt_xi_" + label(x));
  out.table.columns.push_back("reduction_vs_local");
  out.table.columns.push_back("reduction_vs_remote");

  out.table.rows = eval_rows<double>(
      ns, c.threads, [](const double& n) { return "n_ues=" + fmt(n); },
      [&](double n, std::size_t) {
        ExperimentConfig pc = c;
        pc.apply("n_ues", n);
        const OptProblem prob = problem_of(pc, theta);
        const OptConfig oc = opt_of(c);
        OptimumReport joint;
        const auto j = optimum_or_none([&] { return optimize_joint(prob, oc); }, &joint);
        std::vector<Cell> row{n, num(j), num(j ? std::optional(joint.beta_star) : std::nullopt),
                              num(j ? std::optional(joint.xi_star) : std::nullopt)};
        std::vector<std::optional<double>> pure;
        for (double b : betas) {
          const auto v = optimum_or_none([&] { return optimize_xi_given_beta(b, prob, oc); });
          row.push_back(num(v));
          pure.push_back(v);
        }
        for (double x : xis)
          row.push_back(num(optimum_or_none([&] { return optimize_beta_given_xi(x, prob, oc); })));
        auto red = [&](const std::optional<double>& ref) {
          return num(j && ref ? std::optional(1.0 - *j / *ref) : std::nullopt);
        };
        row.push_back(red(pure.front()));
        row.push_back(red(pure.back()));
        return row;
      });
  theta_notes(out, c, ts);
  return out;
}

ExperimentOutput run_fig8(const ExperimentConfig& c) {
  ExperimentOutput out;
  const ThetaSource ts(c);
  const double theta = ts.theta(c.radio.tau_linear);
  struct P {
    double size, f;
  };
  std::vector<P> pts;
  const auto sizes = c.series.empty() ? std::vector<double>{2e6, 3e6} : c.series;
  for (double s : sizes)
    for (double f : axis_or(c, "f_ue", range(0.5e9, 2e9, 7))) pts.push_back({s, f});
  out.table.columns = {"mean_size_bits", "f_ue", "maoi_local_opt", "maoi_remote_opt",
                       "maoi_partial_opt", "beta_opt", "xi_opt"};
  out.table.rows = eval_rows<P>(
      pts, c.threads,
      [](const P& p) { return "mean_size_bits=" + fmt(p.size) + " f_ue=" + fmt(p.f); },
      [&](const P& p, std::size_t) {
        ExperimentConfig pc = c;
        pc.apply("mean_size_bits", p.size);
        pc.apply("f_ue", p.f);
        const OptProblem prob = problem_of(pc, theta);
        const OptConfig oc = opt_of(c);
        OptimumReport joint;
        const auto j = optimum_or_none([&] { return optimize_joint(prob, oc); }, &joint);
        return std::vector<Cell>{
            p.size,
            p.f,
            num(optimum_or_none([&] { return optimize_xi_given_beta(0.0, prob, oc); })),
            num(optimum_or_none([&] { return optimize_xi_given_beta(1.0, prob, oc); })),
            num(j),
            num(j ? std::optional(joint.beta_star) : std::nullopt),
            num(j ? std::optional(joint.xi_star) : std::nullopt)};
      });
  theta_notes(out, c, ts);
  return out;
}

ExperimentOutput run_sweep(const ExperimentConfig& c) {
  ExperimentOutput out;
  const ThetaSource ts(c);
  std::vector<std::vector<double>> pts{{}};
  for (const auto& ax : c.sweep) {
    std::vector<std::vector<double>> next;
    for (const auto& p : pts)
      for (double v : ax.values()) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  for (const auto& ax : c.sweep) out.table.columns.push_back(ax.variable);
  for (const char* col : {"theta", "maoi_local", "maoi_remote", "maoi_partial_analytic",
                          "maoi_partial_sim", "sim_stderr"})
    out.table.columns.push_back(col);
  out.table.rows = eval_rows<std::vector<double>>(
      pts, c.threads,
      [&](const std::vector<double>& p) {
        std::string s;
        for (std::size_t k = 0; k < p.size(); ++k)
          s += (k ? " " : "") + c.sweep[k].variable + "=" + fmt(p[k]);
        return s.empty() ? std::string("base point") : s;
      },
      [&](const std::vector<double>& p, std::size_t i) {
        ExperimentConfig pc = c;
        for (std::size_t k = 0; k < p.size(); ++k) pc.apply(c.sweep[k].variable, p[k]);
        const SchemeValues v =
            evaluate_point(pc, ts, c.sim_enabled, derive_seed(c.sim.seed, i));
        std::vector<Cell> row(p.begin(), p.end());
        for (const auto& x : {v.theta, v.local, v.remote, v.partial, v.sim, v.sim_stderr})
          row.push_back(num(x));
        return row;
      });
  theta_notes(out, c, ts);
  return out;
}

ExperimentOutput run_optimize(const ExperimentConfig& c) {
  ExperimentOutput out;
  const ThetaSource ts(c);
  const double theta = ts.theta(c.radio.tau_linear);
  OptConfig oc = c.opt;
  oc.form = c.xi_form;
  oc.threads = c.threads;
  const OptimumReport r = optimize_joint(problem_of(c, theta), oc);
  out.table.columns = {"theta", "beta_star", "xi_star", "maoi_star", "evaluations",
                       "feasible_fraction", "boundary_flag"};
  out.table.rows.push_back({theta, r.beta_star, r.xi_star, r.maoi_star,
                            static_cast<double>(r.evaluations), r.feasible_fraction,
                            r.boundary_flag ? 1.0 : 0.0});
  theta_notes(out, c, ts);
  return out;
}

ExperimentOutput run_sim(const ExperimentConfig& c) {
  ExperimentOutput out;
  const ThetaSource ts(c);
  const double theta = ts.theta(c.radio.tau_linear);
  const ServiceRates r = service_rates(c.task, c.plat, c.radio.tau_linear, theta);
  const double xi = c.task.tgr;
  const MaoiReport analytic = maoi_for(r, xi, c.xi_form);
  out.table.columns = {"split_mode", "n_tasks", "maoi_analytic", "maoi_sim", "sim_stderr",
                       "relative_error", "maoi_renewal", "stale_completions"};
  const std::vector<SplitMode> modes{SplitMode::kReplicate, SplitMode::kThin};
  std::vector<SimResult> results(modes.size());
  parallel_for(
      modes.size(),
      [&](std::size_t i) {
        SimConfig sc = c.sim;
        sc.split_mode = modes[i];
        sc.xi = xi;
        sc.beta = c.task.cor;
        if (r.is_partial()) {
          sc.rates = r.partial();
          results[i] = simulate_partial(sc);
        } else if (c.task.cor == 0.0) {
          results[i].stats = simulate_mm1(*r.mu_l, xi, sc);
        } else {
          results[i].stats = simulate_tandem(*r.mu_t, *r.mu_e, xi, sc);
        }
      },
      c.threads);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const SawtoothStats& s = results[i].stats;
    out.table.rows.push_back({std::string(to_string(modes[i])),
                              static_cast<double>(c.sim.n_tasks), analytic.maoi, s.maoi_hat,
                              s.stderr, s.maoi_hat / analytic.maoi - 1.0, s.maoi_renewal,
                              static_cast<double>(s.stale)});
    if (c.sim_trace && !results[i].records.empty())
      out.traces.emplace_back(std::string("trace_") + to_string(modes[i]),
                              std::move(results[i].records));
  }
  theta_notes(out, c, ts);
  return out;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> n{"fig3", "fig4", "fig5",     "fig6", "fig7",
                                          "fig8", "sweep", "optimize", "stp",  "sim"};
  return n;
}

ExperimentOutput run_experiment(const std::string& name, const ExperimentConfig& cfg) {
  ExperimentOutput out;
  if (name == "stp")
    out = run_stp(cfg);
  else if (name == "fig3")
    out = run_curve(cfg, "tau_db", axis_or(cfg, "tau_db", range(-10.0, 10.0, 9)));
  else if (name == "fig4")
    out = run_curve(cfg, "beta", axis_or(cfg, "beta", range(0.0, 1.0, 21)));
  else if (name == "fig5")
    out = run_fig5(cfg);
  else if (name == "fig6")
    out = run_fig6(cfg);
  else if (name == "fig7")
    out = run_fig7(cfg);
  else if (name == "fig8")
    out = run_fig8(cfg);
  else if (name == "sweep")
    out = run_sweep(cfg);
  else if (name == "optimize")
    out = run_optimize(cfg);
  else if (name == "sim")
    out = run_sim(cfg);
  else
    throw InvalidArgumentError("unknown experiment '" + name + "'");
  out.name = name;
  return out;
}

void write_csv(std::ostream& os, const ResultTable& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const double* d = std::get_if<double>(&row[i]))
        os << fmt(*d);
      else if (const std::string* s = std::get_if<std::string>(&row[i]))
        os << *s;
    }
    os << '\n';
  }
}

namespace {

nlohmann::ordered_json config_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["radio"] = {{"tau_db", c.tau_db},
                {"alpha", c.radio.alpha},
                {"epsilon", c.radio.epsilon},
                {"lambda_b", c.radio.lambda_b},
                {"p_tx", c.radio.p_tx}};
  j["task"] = {{"mean_size_bits", c.task.mean_size_bits},
               {"cycles_per_bit", c.task.cycles_per_bit},
               {"tgr", c.task.tgr},
               {"cor", c.task.cor}};
  j["platform"] = {{"ue_cpu_hz", c.plat.ue_cpu_hz},
                   {"bs_cpu_hz", c.plat.bs_cpu_hz},
                   {"ues_per_bs", c.plat.ues_per_bs},
                   {"total_bandwidth_hz", c.plat.total_bandwidth_hz}};
  j["stp"] = {{"source", to_string(c.stp_source)},
              {"iterations", c.mc.iterations},
              {"window_radius_factor", c.mc.window_radius_factor}};
  j["sim"] = {{"enabled", c.sim_enabled},
              {"n_tasks", c.sim.n_tasks},
              {"warmup_fraction", c.sim.warmup_fraction},
              {"split_mode", to_string(c.sim.split_mode)},
              {"trace", c.sim_trace}};
  j["opt"] = {{"beta_lo", c.opt.beta_lo},
              {"beta_hi", c.opt.beta_hi},
              {"xi_lo", c.opt.xi_lo},
              {"xi_hi", c.opt.xi_hi},
              {"stability_margin", c.opt.stability_margin},
              {"coarse_grid", c.opt.coarse_grid},
              {"tolerance", c.opt.tolerance},
              {"max_refinements", c.opt.max_refinements}};
  j["analysis"] = {{"xi_form", to_string(c.xi_form)}};
  auto sw = nlohmann::ordered_json::array();
  for (const auto& a : c.sweep)
    sw.push_back({{"variable", a.variable},
                  {"start", a.start},
                  {"stop", a.stop},
                  {"points", a.points},
                  {"scale", a.db_scale ? "dB" : "linear"}});
  j["sweep"] = sw;
  j["series"] = c.series;
  return j;
}

}  // namespace

std::string write_outputs(const ExperimentOutput& out, const ExperimentConfig& cfg,
                          const std::string& dir, double wall_seconds) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  const fs::path csv = fs::path(dir) / (out.name + ".csv");
  {
    std::ofstream os(csv, std::ios::binary);
    if (!os) throw IoError("cannot write " + csv.string());
    write_csv(os, out.table);
  }
  std::vector<std::string> trace_files;
  for (const auto& [tag, recs] : out.traces) {
    const fs::path p = fs::path(dir) / (out.name + "_" + tag + ".csv");
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write " + p.string());
    write_trace_csv(os, recs);
    trace_files.push_back(p.filename().string());
  }

  nlohmann::ordered_json m;
  m["experiment"] = out.name;
  m["version"] = library_version();
  m["seed"] = cfg.seed;
  m["config"] = config_json(cfg);
  m["columns"] = out.table.columns;
  m["rows"] = out.table.rows.size();
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [k, v] : out.summary) summary[k] = v;
  m["summary"] = summary;
  m["notes"] = out.notes;
  m["traces"] = trace_files;
  m["wall_time_s"] = wall_seconds;
  const fs::path mp = fs::path(dir) / (out.name + ".manifest.json");
  std::ofstream os(mp, std::ios::binary);
  if (!os) throw IoError("cannot write " + mp.string());
  os << m.dump(2) << '\n';
  return csv.string();
}

}  // namespace aoimec
