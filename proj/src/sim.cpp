#include "aoimec/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numeric>
#include <ostream>
#include <queue>

#include "aoimec/error.hpp"
#include "aoimec/parallel.hpp"
#include "aoimec/rng.hpp"

namespace aoimec {

const char* to_string(SplitMode m) {
  return m == SplitMode::kReplicate ? "replicate" : "thin";
}

void SimConfig::validate() const {
  if (n_tasks < 100) throw InvalidArgumentError("n_tasks must be >= 100");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 0.5))
    throw InvalidArgumentError("warmup_fraction must lie in [0, 0.5)");
  if (!(xi > 0.0)) throw InvalidArgumentError("xi must be positive");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw InvalidArgumentError("beta must lie in [0, 1]");
}

namespace {

enum class EventType { kArrival, kLocalDone, kTransmitDone, kEdgeDone };

struct Event {
  double time;
  std::uint64_t seq;
  EventType type;
  std::size_t task;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

struct Station {
  std::string name;
  double rate = 0.0;
  Rng rng;
  EventType done_event;
  std::deque<std::size_t> waiting;
  bool busy = false;
  std::vector<double> arrived_at;

  std::size_t in_system = 0;
  double last_t = 0.0;
  double area = 0.0;
  double busy_time = 0.0;
  double first_arrival = -1.0;
  double last_departure = 0.0;
  std::size_t arrivals = 0;
  std::size_t departures = 0;
  std::size_t busy_arrivals = 0;
  double sum_sojourn = 0.0;

  Station(std::string n, double r, std::uint64_t seed, EventType done,
          std::size_t tasks)
      : name(std::move(n)), rate(r), rng(seed), done_event(done),
        arrived_at(tasks, 0.0) {}

  void advance(double t) {
    area += static_cast<double>(in_system) * (t - last_t);
    if (busy) busy_time += t - last_t;
    last_t = t;
  }

  QueueStats stats() const {
    QueueStats q;
    q.name = name;
    q.arrivals = arrivals;
    q.departures = departures;
    if (arrivals == 0) return q;
    q.span = last_departure - first_arrival;
    if (q.span > 0.0) {
      q.arrival_rate = arrivals / q.span;
      q.departure_rate = departures / q.span;
      q.mean_in_system = area / q.span;
      q.utilization = busy_time / q.span;
    }
    q.mean_system_time = departures ? sum_sojourn / departures : 0.0;
    q.busy_on_arrival = static_cast<double>(busy_arrivals) / arrivals;
    return q;
  }
};

struct Network {
  std::size_t n;
  double xi;
  bool replicate;
  double p_local;  // thin mode only
  double mu_l, mu_t, mu_e;
  std::uint64_t seed;
};

struct NetworkRun {
  std::vector<TaskRecord> records;
  std::vector<QueueStats> queues;
};

NetworkRun run_network(const Network& net) {
  const std::size_t n = net.n;
  Rng arrivals = Rng::substream(net.seed, 0);
  Rng routing = Rng::substream(net.seed, 1);
  const bool use_local = net.replicate || net.p_local > 0.0;
  const bool use_remote = net.replicate || net.p_local < 1.0;

  Station local("local", net.mu_l, derive_seed(net.seed, 2), EventType::kLocalDone,
                use_local ? n : 0);
  Station transmit("transmit", net.mu_t, derive_seed(net.seed, 3),
                   EventType::kTransmitDone, use_remote ? n : 0);
  Station edge("edge", net.mu_e, derive_seed(net.seed, 4), EventType::kEdgeDone,
               use_remote ? n : 0);

  std::vector<TaskRecord> rec(n);
  std::priority_queue<Event, std::vector<Event>, Later> calendar;
  std::uint64_t seq = 0;
  auto schedule = [&](double t, EventType type, std::size_t task) {
    calendar.push(Event{t, seq++, type, task});
  };

  auto start_service = [&](Station& s, std::size_t task, double t) {
    s.busy = true;
    const double service = s.rng.exponential(s.rate);
    if (&s == &local) rec[task].local_service = service;
    schedule(t + service, s.done_event, task);
  };
  auto arrive = [&](Station& s, std::size_t task, double t) {
    s.advance(t);
    if (s.first_arrival < 0.0) s.first_arrival = t;
    if (s.in_system > 0) ++s.busy_arrivals;
    ++s.in_system;
    ++s.arrivals;
    s.arrived_at[task] = t;
    if (!s.busy)
      start_service(s, task, t);
    else
      s.waiting.push_back(task);
  };
  auto depart = [&](Station& s, std::size_t task, double t) {
    s.advance(t);
    --s.in_system;
    ++s.departures;
    s.sum_sojourn += t - s.arrived_at[task];
    s.last_departure = t;
    if (!s.waiting.empty()) {
      const std::size_t next = s.waiting.front();
      s.waiting.pop_front();
      start_service(s, next, t);
    } else {
      s.busy = false;
    }
  };

  schedule(arrivals.exponential(net.xi), EventType::kArrival, 0);
  double prev_gen = 0.0;
  while (!calendar.empty()) {
    const Event ev = calendar.top();
    calendar.pop();
    const double t = ev.time;
    const std::size_t i = ev.task;
    switch (ev.type) {
      case EventType::kArrival: {
        rec[i].gen_time = t;
        rec[i].interarrival = t - prev_gen;
        prev_gen = t;
        if (net.replicate) {
          arrive(local, i, t);
          arrive(transmit, i, t);
        } else if (routing.uniform() < net.p_local) {
          arrive(local, i, t);
        } else {
          arrive(transmit, i, t);
        }
        if (i + 1 < n)
          schedule(t + arrivals.exponential(net.xi), EventType::kArrival, i + 1);
        break;
      }
      case EventType::kLocalDone:
        depart(local, i, t);
        rec[i].local_done = t;
        break;
      case EventType::kTransmitDone:
        depart(transmit, i, t);
        arrive(edge, i, t);
        break;
      case EventType::kEdgeDone:
        depart(edge, i, t);
        rec[i].edge_done = t;
        break;
    }
  }

  for (auto& r : rec) {
    r.complete_time = std::max(r.local_done.value_or(r.gen_time),
                               r.edge_done.value_or(r.gen_time));
    r.system_time_max = r.complete_time - r.gen_time;
  }

  NetworkRun out;
  out.records = std::move(rec);
  if (use_local) out.queues.push_back(local.stats());
  if (use_remote) {
    out.queues.push_back(transmit.stats());
    out.queues.push_back(edge.stats());
  }
  return out;
}

std::size_t warmup_index(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

void check_sorted(const std::vector<TaskRecord>& records) {
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].gen_time < records[i - 1].gen_time)
      throw InvalidArgumentError("records must be sorted by gen_time");
}

}  // namespace

SawtoothStats sawtooth_maoi(const std::vector<TaskRecord>& records,
                            double warmup_fraction) {
  if (records.empty()) throw InvalidArgumentError("no records");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw InvalidArgumentError("warmup_fraction must lie in [0, 1)");
  check_sorted(records);

  const std::size_t n = records.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].complete_time < records[b].complete_time;
  });

  const std::size_t k0 = warmup_index(n, warmup_fraction);
  bool started = warmup_fraction == 0.0;
  double t_prev = 0.0;
  double g = 0.0;  // freshest delivered generation time
  double t_start = 0.0;
  std::vector<double> piece_area;
  std::vector<double> piece_dt;
  piece_area.reserve(n);
  piece_dt.reserve(n);
  std::size_t stale = 0;

  for (std::size_t idx : order) {
    const TaskRecord& r = records[idx];
    const double c = r.complete_time;
    if (!started) {
      if (idx >= k0) {
        started = true;
        t_prev = t_start = c;
        g = r.gen_time;
      }
      continue;
    }
    // A task generated exactly at the baseline instant still counts once.
    const bool fresh = r.gen_time > g || (piece_area.empty() && r.gen_time == g);
    if (!fresh) {
      ++stale;
      continue;
    }
    piece_area.push_back(0.5 * ((c - g) * (c - g) - (t_prev - g) * (t_prev - g)));
    piece_dt.push_back(c - t_prev);
    t_prev = c;
    g = r.gen_time;
  }

  SawtoothStats s;
  s.informative = piece_area.size();
  s.stale = stale;
  s.area = std::accumulate(piece_area.begin(), piece_area.end(), 0.0);
  s.duration = t_prev - t_start;
  if (!(s.duration > 0.0))
    throw InsufficientSamplesError("observation window is empty");
  s.maoi_hat = s.area / s.duration;

  const std::size_t m = piece_area.size();
  const std::size_t batches = std::min(kBatchCount, m);
  s.batches = batches;
  if (batches >= 2) {
    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t lo = b * m / batches;
      const std::size_t hi = (b + 1) * m / batches;
      double a = 0.0, d = 0.0;
      for (std::size_t k = lo; k < hi; ++k) {
        a += piece_area[k];
        d += piece_dt[k];
      }
      means[b] = d > 0.0 ? a / d : 0.0;
    }
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / batches;
    double ss = 0.0;
    for (double v : means) ss += (v - mean) * (v - mean);
    s.stderr = std::sqrt(ss / (batches - 1) / batches);
  }

  double num = 0.0, den = 0.0;
  for (std::size_t i = std::max<std::size_t>(k0, 1); i < n; ++i) {
    const double a = records[i].interarrival;
    num += 0.5 * a * a + a * records[i].system_time_max;
    den += a;
  }
  s.maoi_renewal = den > 0.0 ? num / den : 0.0;
  return s;
}

SawtoothPieces sawtooth_pieces(const std::vector<TaskRecord>& records) {
  if (records.empty()) throw InvalidArgumentError("no records");
  check_sorted(records);
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].complete_time < records[i - 1].complete_time)
      throw InvalidArgumentError(
          "trapezoid decomposition needs completions in generation order");
  SawtoothPieces p;
  const double t1 = records.front().gen_time;
  const double T1 = records.front().system_time_max;
  p.q_first = 0.5 * (t1 + T1) * (t1 + T1) - 0.5 * T1 * T1;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double a = records[i].gen_time - records[i - 1].gen_time;
    p.q_interior.push_back(0.5 * a * a + a * records[i].system_time_max);
  }
  const double Tz = records.back().system_time_max;
  p.q_last = 0.5 * Tz * Tz;
  p.total = p.q_first + std::accumulate(p.q_interior.begin(), p.q_interior.end(), 0.0) +
            p.q_last;
  p.duration = records.back().complete_time;
  return p;
}

EmpiricalConditionals empirical_conditionals(const std::vector<TaskRecord>& records,
                                             double warmup_fraction,
                                             std::size_t min_samples) {
  check_sorted(records);
  const std::size_t n = records.size();
  const std::size_t k0 = std::max<std::size_t>(warmup_index(n, warmup_fraction), 1);
  if (n <= k0 || n - k0 < min_samples)
    throw InsufficientSamplesError("need at least " + std::to_string(min_samples) +
                                   " post-warmup tasks");

  EmpiricalConditionals e;
  e.samples = n - k0;
  double sa = 0.0, sa2 = 0.0, sa4 = 0.0;
  std::size_t both = 0, local_dom = 0;
  double at_local = 0.0, at_remote = 0.0;
  std::size_t y_n = 0, y_pos = 0;
  std::size_t busy_n = 0, busy = 0;
  std::optional<std::size_t> prev_local;

  for (std::size_t i = k0; i < n; ++i) {
    const TaskRecord& r = records[i];
    const double a = r.interarrival;
    sa += a;
    sa2 += a * a;
    sa4 += a * a * a * a;
    if (r.local_done && r.edge_done) {
      ++both;
      const double tl = *r.local_done - r.gen_time;
      const double tte = *r.edge_done - r.gen_time;
      if (tl > tte) {
        ++local_dom;
        at_local += a * tl;
      } else {
        at_remote += a * tte;
      }
    }
    if (r.local_service && r.edge_done) {
      ++y_n;
      if (*r.edge_done - r.gen_time > *r.local_service) ++y_pos;
    }
    if (r.local_done) {
      if (prev_local) {
        const TaskRecord& p = records[*prev_local];
        ++busy_n;
        if (*p.local_done - p.gen_time > r.gen_time - p.gen_time) ++busy;
      }
      prev_local = i;
    }
  }
  const double m = static_cast<double>(e.samples);
  e.e_a = sa / m;
  e.e_a2 = sa2 / m;
  e.e_a_stderr = std::sqrt(std::max(0.0, sa2 / m - e.e_a * e.e_a) / m);
  e.e_a2_stderr = std::sqrt(std::max(0.0, sa4 / m - e.e_a2 * e.e_a2) / m);
  if (both > 0) {
    e.p_local_dominates = static_cast<double>(local_dom) / both;
    e.p_remote_dominates = 1.0 - *e.p_local_dominates;
    if (local_dom > 0) e.e_a_t_local = at_local / local_dom;
    if (local_dom < both) e.e_a_t_remote = at_remote / (both - local_dom);
  }
  if (y_n > 0) e.p_y_positive = static_cast<double>(y_pos) / y_n;
  if (busy_n > 0) e.p_prev_local_busy = static_cast<double>(busy) / busy_n;
  return e;
}

namespace {

SimResult finish(NetworkRun run, const SimConfig& cfg) {
  SimResult out;
  out.stats = sawtooth_maoi(run.records, cfg.warmup_fraction);
  out.stats.queues = std::move(run.queues);
  const std::size_t post =
      run.records.size() - warmup_index(run.records.size(), cfg.warmup_fraction);
  if (post >= 10000)
    out.stats.conditionals = empirical_conditionals(run.records, cfg.warmup_fraction);
  out.records = std::move(run.records);
  return out;
}

}  // namespace

SimResult simulate_partial(const SimConfig& cfg) {
  cfg.validate();
  const JacksonRates& r = cfg.rates;
  if (!(r.mu_l > 0.0 && r.mu_t > 0.0 && r.mu_e > 0.0))
    throw InvalidArgumentError("service rates must be positive");
  const bool rep = cfg.split_mode == SplitMode::kReplicate;
  // In replicate mode every queue sees the full stream.
  const double lam_l = rep ? cfg.xi : (1.0 - cfg.beta) * cfg.xi;
  const double lam_r = rep ? cfg.xi : cfg.beta * cfg.xi;
  if (!(lam_l < r.mu_l)) throw InstabilityError("C2", "local queue unstable");
  if (!(lam_r < r.mu_t)) throw InstabilityError("C3", "transmit queue unstable");
  if (!(lam_r < r.mu_e)) throw InstabilityError("C4", "edge queue unstable");
  Network net{cfg.n_tasks, cfg.xi, rep, 1.0 - cfg.beta, r.mu_l, r.mu_t, r.mu_e,
              cfg.seed};
  return finish(run_network(net), cfg);
}

SawtoothStats simulate_mm1(double mu, double xi, const SimConfig& cfg) {
  SimConfig c = cfg;
  c.xi = xi;
  c.validate();
  if (!(mu > 0.0)) throw InvalidArgumentError("mu must be positive");
  if (!(xi < mu)) throw InstabilityError("local", "M/M/1 unstable: xi >= mu");
  Network net{c.n_tasks, xi, false, 1.0, mu, 1.0, 1.0, c.seed};
  return finish(run_network(net), c).stats;
}

SawtoothStats simulate_tandem(double mu_t, double mu_e, double xi,
                              const SimConfig& cfg) {
  SimConfig c = cfg;
  c.xi = xi;
  c.validate();
  if (!(mu_t > 0.0 && mu_e > 0.0)) throw InvalidArgumentError("rates must be positive");
  if (!(xi < mu_t)) throw InstabilityError("transmit", "transmit queue unstable");
  if (!(xi < mu_e)) throw InstabilityError("edge", "edge queue unstable");
  Network net{c.n_tasks, xi, false, 0.0, 1.0, mu_t, mu_e, c.seed};
  return finish(run_network(net), c).stats;
}

SawtoothStats simulate_partial_replicated(const SimConfig& cfg, std::size_t reps,
                                          unsigned threads) {
  if (reps == 0) throw InvalidArgumentError("reps must be >= 1");
  std::vector<SawtoothStats> parts(reps);
  parallel_for(
      reps,
      [&](std::size_t k) {
        SimConfig c = cfg;
        c.seed = derive_seed(cfg.seed, k);
        parts[k] = simulate_partial(c).stats;
      },
      threads);
  SawtoothStats m;
  double var = 0.0;
  for (const auto& p : parts) {
    m.area += p.area;
    m.duration += p.duration;
    m.informative += p.informative;
    m.stale += p.stale;
    m.batches += p.batches;
  }
  for (const auto& p : parts) {
    const double w = p.duration / m.duration;
    var += w * w * p.stderr * p.stderr;
    m.maoi_renewal += w * p.maoi_renewal;
  }
  m.maoi_hat = m.area / m.duration;
  m.stderr = std::sqrt(var);
  return m;
}

void write_trace_csv(std::ostream& os, const std::vector<TaskRecord>& records) {
  os << "gen_time,local_done,edge_done,complete_time,interarrival\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.9f", v);
    os << buf;
  };
  for (const auto& r : records) {
    put(r.gen_time);
    os << ',';
    if (r.local_done) put(*r.local_done);
    os << ',';
    if (r.edge_done) put(*r.edge_done);
    os << ',';
    put(r.complete_time);
    os << ',';
    put(r.interarrival);
    os << '\n';
  }
}

}  // namespace aoimec
