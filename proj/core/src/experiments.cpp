#include "accf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "accf/server.hpp"

namespace accf::experiments {

namespace {

const ServerId kA1{"A1"};
const ServerId kA2{"A2"};
const ServerId kB1{"B1"};
const ServerId kB2{"B2"};

void require_servers(const GroupConfig& groups, std::initializer_list<ServerId> ids, std::string_view app) {
  for (const auto& id : ids) {
    if (!groups.has_server(id)) {
      throw GroupingError(std::string(app) + " needs server " + id.str());
    }
  }
}

void require_hosted(const GroupConfig& groups, const ServerId& server, const Key& key) {
  if (!groups.hosts_key(server, key)) {
    throw GroupingError("server " + server.str() + " does not host " + key);
  }
}

// Slows every server-to-server message sent by `server`; its client replies
// keep the normal latency.
void delay_server_links(SystemConfig& config, const ServerId& server, SimTime delay) {
  auto& net = config.network;
  for (const auto& [peer, info] : config.groups.servers) {
    if (peer == server) continue;
    net.latency[{server.str(), peer.str()}] = net.base_latency(server.str(), peer.str(), false) + delay;
  }
}

Window window_for(const WorkloadSpec& spec) {
  const auto begin = static_cast<SimTime>(static_cast<double>(spec.duration_ms) * spec.warmup_fraction);
  return Window{begin, spec.duration_ms};
}

RunOutput finish(std::unique_ptr<sim::Simulator> sim, const WorkloadSpec& spec, App app, SimTime delay,
                 std::uint64_t seed, const std::function<bool(const TraceRecord&)>& unit) {
  sim->run_until(spec.duration_ms);
  RunOutput out;
  out.stats = sim->stats();
  out.trace = sim->take_trace();
  out.report = checker::check_trace(out.trace);
  const Measurement m = measure(out.trace, window_for(spec), unit);
  out.result.app = std::string(to_string(app));
  out.result.delay_ms = delay;
  out.result.seed = seed;
  out.result.throughput = m.throughput;
  out.result.mean_park_ms = m.mean_park_ms;
  out.result.mean_staleness_ms = m.mean_staleness_ms;
  out.result.parks = m.parks;
  out.result.completed = m.completed;
  return out;
}

const Key kCounterKey = "A/counter";

RunOutput app1_impl(SystemConfig config, SimTime delay, std::uint64_t seed, const WorkloadSpec& spec) {
  require_hosted(config.groups, kA1, kCounterKey);
  require_hosted(config.groups, kA2, kCounterKey);
  auto sim = make_simulator(config, seed);
  const auto add = [&](const std::string& name, const ServerId& server, bool first) {
    workloads::PingPongClient::Options options{kCounterKey, server,
                                               default_checking_group(config.groups, server), first,
                                               spec.poll_ms};
    sim->add_actor(name, sim::ActorKind::kClient, {},
                   std::make_unique<workloads::PingPongClient>(ClientId{name}, options));
  };
  add("C1", kA1, true);
  add("C2", kA2, false);
  return finish(std::move(sim), spec, App::kApp1, delay, seed, [](const TraceRecord& r) {
    return r.kind == TraceKind::kPutAck && r.status == "OK";
  });
}

const Key kAppKeyA = "A/x";
const Key kAppKeyB = "B/x";
const std::string kReader = "C3";

RunOutput app2_impl(SystemConfig config, SimTime delay, std::uint64_t seed, const WorkloadSpec& spec,
                    bool with_writer) {
  require_hosted(config.groups, kA1, kAppKeyA);
  require_hosted(config.groups, kB1, kAppKeyB);
  auto sim = make_simulator(config, seed);
  if (with_writer) {
    require_hosted(config.groups, kA2, kAppKeyA);
    require_hosted(config.groups, kB2, kAppKeyB);
    std::vector<workloads::Target> writes{
        {kAppKeyA, kA2, default_checking_group(config.groups, kA2)},
        {kAppKeyB, kB2, default_checking_group(config.groups, kB2)},
    };
    sim->add_actor("C4", sim::ActorKind::kClient, {},
                   std::make_unique<workloads::RoundRobinWriter>(ClientId{"C4"}, writes, spec.writer_pause_ms));
  }
  std::vector<workloads::Target> reads{
      {kAppKeyA, kA1, default_checking_group(config.groups, kA1)},
      {kAppKeyB, kB1, default_checking_group(config.groups, kB1)},
  };
  sim->add_actor(kReader, sim::ActorKind::kClient, {},
                 std::make_unique<workloads::RoundRobinReader>(ClientId{kReader}, reads, spec.reader_pause_ms));
  return finish(std::move(sim), spec, App::kApp2, delay, seed, [](const TraceRecord& r) {
    return r.kind == TraceKind::kGetReply && r.actor == kReader;
  });
}

std::string fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  return buf;
}

}  // namespace

std::string_view to_string(App app) { return app == App::kApp1 ? "app1" : "app2"; }

App parse_app(std::string_view text) {
  if (text == "app1") return App::kApp1;
  if (text == "app2") return App::kApp2;
  throw std::invalid_argument("unknown workload '" + std::string(text) + "' (expected app1 or app2)");
}

Measurement measure(const Trace& trace, Window window, const std::function<bool(const TraceRecord&)>& unit) {
  if (window.end <= window.begin) throw std::invalid_argument("empty measurement window");
  Measurement m;
  double staleness = 0.0;
  std::size_t stale_samples = 0;
  double parked = 0.0;
  std::map<std::string, SimTime> park_start;
  const auto inside = [&](SimTime t) { return t >= window.begin && t < window.end; };

  for (const auto& record : trace) {
    if (record.kind == TraceKind::kGetPark) {
      park_start.try_emplace(record.peer, record.time);
      continue;
    }
    if (record.kind == TraceKind::kGetReply) {
      if (auto it = park_start.find(record.actor); it != park_start.end()) {
        if (inside(it->second)) {
          parked += static_cast<double>(record.time - it->second);
          ++m.parks;
        }
        park_start.erase(it);
      }
      if (inside(record.time) && record.status == "OK" && record.wt) {
        staleness += static_cast<double>(record.time - record.wt->l);
        ++stale_samples;
      }
    }
    if (inside(record.time) && unit(record)) ++m.completed;
  }
  m.throughput = static_cast<double>(m.completed) * 1000.0 / static_cast<double>(window.end - window.begin);
  m.mean_staleness_ms = stale_samples ? staleness / static_cast<double>(stale_samples) : 0.0;
  m.mean_park_ms = m.parks ? parked / static_cast<double>(m.parks) : 0.0;
  return m;
}

std::unique_ptr<sim::Simulator> make_simulator(const SystemConfig& config, std::uint64_t seed) {
  auto sim = std::make_unique<sim::Simulator>(config.network, seed);
  auto groups = std::make_shared<const GroupConfig>(config.groups);
  for (const auto& [id, info] : config.groups.servers) {
    sim->add_actor(id.str(), sim::ActorKind::kServer, sim::ClockModel{info.clock_offset_ms, info.clock_drift},
                   std::make_unique<Server>(id, groups, config.protocol));
  }
  return sim;
}

RunOutput run_app1(const SystemConfig& config, SimTime delay_b1, std::uint64_t seed, const WorkloadSpec& spec) {
  require_servers(config.groups, {kA1, kA2, kB1}, "app1");
  SystemConfig delayed = config;
  delay_server_links(delayed, kB1, delay_b1);
  return app1_impl(std::move(delayed), delay_b1, seed, spec);
}

RunOutput run_app1_baseline(const SystemConfig& config, std::uint64_t seed, const WorkloadSpec& spec) {
  require_servers(config.groups, {kA1, kA2}, "app1");
  return app1_impl(restrict_to(config, {kA1, kA2}), 0, seed, spec);
}

RunOutput run_app2(const SystemConfig& config, SimTime delay_b2, std::uint64_t seed, const WorkloadSpec& spec) {
  require_servers(config.groups, {kA1, kA2, kB1, kB2}, "app2");
  SystemConfig delayed = config;
  delay_server_links(delayed, kB2, delay_b2);
  return app2_impl(std::move(delayed), delay_b2, seed, spec, true);
}

RunOutput run_app2_baseline(const SystemConfig& config, std::uint64_t seed, const WorkloadSpec& spec) {
  require_servers(config.groups, {kA1, kB1}, "app2");
  return app2_impl(config, 0, seed, spec, false);
}

SystemConfig restrict_to(const SystemConfig& config, const std::set<ServerId>& keep) {
  SystemConfig out = config;
  auto& g = out.groups;
  std::erase_if(g.servers, [&](const auto& e) { return !keep.contains(e.first); });
  const auto trim = [&](auto& groups) {
    for (auto it = groups.begin(); it != groups.end();) {
      std::erase_if(it->second, [&](const ServerId& s) { return !keep.contains(s); });
      it = it->second.empty() ? groups.erase(it) : std::next(it);
    }
  };
  trim(g.tracking);
  trim(g.checking);
  trim(g.placement);
  return out;
}

const SweepCell& SweepTable::cell(const std::string& grouping, SimTime delay) const {
  for (const auto& c : cells) {
    if (c.grouping == grouping && c.delay_ms == delay) return c;
  }
  throw std::out_of_range("no sweep cell for " + grouping + " at " + std::to_string(delay) + " ms");
}

SweepTable sweep(App app, const std::vector<std::string>& groupings, const std::vector<SimTime>& delays,
                 const std::vector<std::uint64_t>& seeds, const SweepOptions& options) {
  if (groupings.empty() || delays.empty() || seeds.empty()) {
    throw std::invalid_argument("sweep needs at least one grouping, delay and seed");
  }
  const Topology topology{options.base.groups.servers, options.base.groups.placement};

  struct Task {
    std::size_t grouping;
    std::optional<SimTime> delay;  // nullopt = baseline
    std::uint64_t seed;
  };
  std::vector<SystemConfig> configs;
  for (const auto& name : groupings) {
    SystemConfig cfg = options.base;
    cfg.groups = preset(name, topology);
    cfg.groups.epoch = options.base.groups.epoch;
    configs.push_back(std::move(cfg));
  }
  std::vector<Task> tasks;
  for (std::size_t g = 0; g < groupings.size(); ++g) {
    for (auto seed : seeds) tasks.push_back({g, std::nullopt, seed});
    for (auto delay : delays) {
      for (auto seed : seeds) tasks.push_back({g, delay, seed});
    }
  }

  std::vector<RunOutput> outputs(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& task = tasks[i];
      const auto& cfg = configs[task.grouping];
      try {
        if (app == App::kApp1) {
          outputs[i] = task.delay ? run_app1(cfg, *task.delay, task.seed, options.workload)
                                  : run_app1_baseline(cfg, task.seed, options.workload);
        } else {
          outputs[i] = task.delay ? run_app2(cfg, *task.delay, task.seed, options.workload)
                                  : run_app2_baseline(cfg, task.seed, options.workload);
        }
        if (!outputs[i].report.ok()) {
          errors[i] = "checker found violations:\n" + checker::format_report(outputs[i].report);
        }
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
      if (!options.keep_traces) outputs[i].trace.clear();
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i].empty()) {
      const auto& task = tasks[i];
      throw SweepAborted(std::string(to_string(app)) + " " + groupings[task.grouping] + " " +
                         (task.delay ? "delay " + std::to_string(*task.delay) + " ms" : std::string("baseline")) +
                         " seed " + std::to_string(task.seed) + ": " + errors[i]);
    }
  }

  SweepTable table;
  table.app = app;
  std::vector<double> baseline_throughput(groupings.size(), 0.0);
  for (std::size_t g = 0; g < groupings.size(); ++g) {
    ExperimentResult base;
    base.app = std::string(to_string(app));
    base.grouping = groupings[g];
    base.normalized = 1.0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].grouping != g || tasks[i].delay) continue;
      const auto& r = outputs[i].result;
      base.throughput += r.throughput;
      base.mean_park_ms += r.mean_park_ms;
      base.mean_staleness_ms += r.mean_staleness_ms;
      base.parks += r.parks;
      base.completed += r.completed;
    }
    const auto n = static_cast<double>(seeds.size());
    base.throughput /= n;
    base.mean_park_ms /= n;
    base.mean_staleness_ms /= n;
    baseline_throughput[g] = base.throughput;
    table.baselines.push_back(base);
  }

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& task = tasks[i];
    if (!task.delay) continue;
    ExperimentResult r = outputs[i].result;
    r.grouping = groupings[task.grouping];
    const double base = baseline_throughput[task.grouping];
    r.normalized = base > 0 ? r.throughput / base : 0.0;
    table.rows.push_back(r);
    if (options.keep_traces) {
      table.traces.emplace(std::make_tuple(r.grouping, *task.delay, task.seed), std::move(outputs[i].trace));
    }
  }

  for (const auto& name : groupings) {
    for (auto delay : delays) {
      SweepCell c{name, delay, 0.0, 0.0, 0.0};
      std::size_t n = 0;
      for (const auto& r : table.rows) {
        if (r.grouping != name || r.delay_ms != delay) continue;
        c.mean_normalized += r.normalized;
        c.min_normalized = n ? std::min(c.min_normalized, r.normalized) : r.normalized;
        c.max_normalized = n ? std::max(c.max_normalized, r.normalized) : r.normalized;
        ++n;
      }
      if (n) c.mean_normalized /= static_cast<double>(n);
      table.cells.push_back(c);
    }
  }
  return table;
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  const auto row = [&](const ExperimentResult& r, const std::string& delay, const std::string& seed) {
    os << r.app << ',' << r.grouping << ',' << delay << ',' << seed << ',' << fixed(r.throughput) << ','
       << fixed(r.normalized) << ',' << fixed(r.mean_park_ms) << ',' << fixed(r.mean_staleness_ms) << '\n';
  };
  for (const auto& r : table.baselines) row(r, "baseline", "all");
  for (const auto& r : table.rows) row(r, std::to_string(r.delay_ms), std::to_string(r.seed));
  return os.str();
}

std::string plot_data(const SweepTable& table, const std::string& grouping) {
  std::ostringstream os;
  os << "# delay_ms normalized_mean normalized_min normalized_max\n";
  for (const auto& c : table.cells) {
    if (c.grouping != grouping) continue;
    os << c.delay_ms << ' ' << fixed(c.mean_normalized) << ' ' << fixed(c.min_normalized) << ' '
       << fixed(c.max_normalized) << '\n';
  }
  return os.str();
}

std::vector<SimTime> default_delays() { return {0, 50, 100, 250, 500, 1000}; }

// Randomized scenarios ------------------------------------------------------

RandomScenario random_scenario(std::uint64_t seed, const RandomLimits& limits) {
  std::mt19937_64 rng(seed);
  const auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  RandomScenario out;
  out.seed = seed;
  auto& g = out.config.groups;

  const auto n_servers = pick(2, std::max(2, limits.max_servers));
  const auto n_replicas = pick(1, n_servers);
  std::vector<ServerId> servers;
  for (std::int64_t i = 1; i <= n_servers; ++i) {
    ServerId id{"S" + std::to_string(i)};
    servers.push_back(id);
    ServerInfo info{id, "region" + std::to_string(i % n_replicas), std::to_string(pick(1, n_replicas)),
                    pick(0, 40), static_cast<double>(pick(-100, 100)) / 100000.0};
    g.servers.emplace(id, info);
  }
  const auto random_subset = [&] {
    std::set<ServerId> subset;
    while (subset.empty()) {
      for (const auto& s : servers) {
        if (rng() % 2) subset.insert(s);
      }
    }
    return subset;
  };

  const auto n_classes = pick(1, 3);
  std::vector<std::string> classes;
  for (std::int64_t k = 0; k < n_classes; ++k) {
    classes.push_back("K" + std::to_string(k));
    g.placement[classes.back()] = random_subset();
  }
  const auto n_tracking = pick(1, n_servers);
  for (const auto& s : servers) g.tracking[TrackingGroupId{"t" + std::to_string(pick(0, n_tracking - 1))}].insert(s);
  const auto n_checking = pick(1, n_servers);
  for (std::int64_t c = 0; c < n_checking; ++c) g.checking[CheckingGroupId{"c" + std::to_string(c)}] = random_subset();
  for (const auto& s : servers) {
    if (g.checking_groups(s).empty()) {
      g.checking[CheckingGroupId{"c" + std::to_string(pick(0, n_checking - 1))}].insert(s);
    }
  }

  auto& net = out.config.network;
  net.default_latency_ms = pick(1, 30);
  net.client_latency_ms = pick(1, 3);
  for (const auto& from : servers) {
    for (const auto& to : servers) {
      if (from != to && rng() % 3 == 0) net.latency[{from.str(), to.str()}] = pick(1, 80);
    }
  }
  net.jitter_ms = pick(0, 10);
  if (limits.allow_non_fifo && rng() % 2) {
    net.fifo = false;
    net.duplicate_probability = 0.1;
  }
  out.config.protocol.heartbeat_ms = pick(5, 20);
  out.config.protocol.gossip_ms = pick(5, 20);

  const auto key_of = [&](const std::string& cls) { return cls + "/k" + std::to_string(pick(0, 2)); };
  const auto n_clients = pick(1, std::max(1, limits.max_clients));
  const auto per_client = std::max<std::int64_t>(1, limits.max_ops / n_clients);
  SimTime longest = 0;
  for (std::int64_t c = 0; c < n_clients; ++c) {
    ClientId id{"C" + std::to_string(c + 1)};
    const bool reader = limits.single_checking_group ? c % 2 == 1 || n_clients == 1 : false;
    const bool writer = limits.single_checking_group ? !reader : false;
    auto cg_it = std::next(g.checking.begin(), pick(0, static_cast<std::int64_t>(g.checking.size()) - 1));
    const CheckingGroupId home = cg_it->first;
    std::vector<std::pair<std::string, ServerId>> readable;
    for (const auto& cls : classes) {
      for (const auto& host : g.placement.at(cls)) {
        if (cg_it->second.contains(host)) readable.emplace_back(cls, host);
      }
    }

    std::vector<workloads::ScriptedOp> ops;
    SimTime think_total = 0;
    const auto n_ops = pick(1, per_client);
    for (std::int64_t k = 0; k < n_ops; ++k) {
      workloads::ScriptedOp op;
      op.think_ms = pick(0, 20);
      think_total += op.think_ms;
      const bool is_get = reader || (!writer && rng() % 2);
      if (is_get && reader) {
        if (readable.empty()) break;
        const auto& [cls, host] = readable[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(readable.size()) - 1))];
        op.kind = workloads::ScriptedOp::Kind::kGet;
        op.key = key_of(cls);
        op.server = host;
        op.cg = home;
      } else {
        const auto& cls = classes[static_cast<std::size_t>(pick(0, n_classes - 1))];
        const auto& hosts = g.placement.at(cls);
        op.key = key_of(cls);
        op.server = *std::next(hosts.begin(), pick(0, static_cast<std::int64_t>(hosts.size()) - 1));
        if (is_get) {
          op.kind = workloads::ScriptedOp::Kind::kGet;
          const auto cgs = g.checking_groups(op.server);
          op.cg = *std::next(cgs.begin(), pick(0, static_cast<std::int64_t>(cgs.size()) - 1));
        } else {
          op.kind = workloads::ScriptedOp::Kind::kPut;
          op.value = id.str() + "-" + std::to_string(k);
        }
      }
      ops.push_back(std::move(op));
    }
    longest = std::max(longest, think_total + static_cast<SimTime>(ops.size()) * 400);
    out.clients.emplace(id, std::move(ops));
  }
  out.duration_ms = longest + 5000;
  return out;
}

ScenarioOutput run_scenario(const RandomScenario& scenario) {
  auto sim = make_simulator(scenario.config, scenario.seed);
  ScenarioOutput out;
  for (const auto& [id, ops] : scenario.clients) {
    out.ops_planned += ops.size();
    sim->add_actor(id.str(), sim::ActorKind::kClient, {}, std::make_unique<workloads::ScriptedClient>(id, ops));
  }
  sim->run_until(scenario.duration_ms);
  for (const auto& [id, ops] : scenario.clients) {
    out.ops_completed += sim->actor_as<workloads::ScriptedClient>(id.str()).completed();
  }
  for (const auto& [id, info] : scenario.config.groups.servers) {
    out.parked_total += sim->actor_as<Server>(id.str()).parked_total();
  }
  out.stats = sim->stats();
  out.trace = sim->take_trace();
  out.report = checker::check_trace(out.trace);
  return out;
}

ReconfigOutput run_reconfiguration_scenario(std::uint64_t seed) {
  SystemConfig config = make_system_config(four_server_topology(), "two-by-two");
  const CheckingGroupId cg1{"cg1"};
  const CheckingGroupId cg3{"cg3"};
  const CheckingGroupId cg4{"cg4"};
  auto sim = make_simulator(config, seed);
  ReconfigOutput out;

  const auto with_cg3 = add_checking_group(config.groups, cg3, {kA1, kB2});
  const auto with_cg4 = add_checking_group(with_cg3.config, cg4, {kA2, kB1});
  const auto without_cg4 = remove_checking_group(with_cg4.config, cg4);
  try {
    remove_checking_group(without_cg4, cg1);
  } catch (const GroupingError&) {
    out.removal_guard_rejected = true;
  }

  const auto broadcast = [&](SimTime at, const GroupConfig& next, std::string description) {
    auto shared = std::make_shared<const GroupConfig>(next);
    for (const auto& [id, info] : next.servers) {
      sim->inject(at, "control", id.str(), Reconfigure{shared, description});
    }
  };
  broadcast(300, with_cg3.config, "add-cg3");
  broadcast(400, with_cg4.config, "add-cg4");
  broadcast(1000, without_cg4, "remove-cg4");

  sim->at(700, [&](sim::Simulator& s) {
    out.svv_initialized_on_members = s.actor_as<Server>("A1").stable_vector(cg3) != nullptr &&
                                     s.actor_as<Server>("B2").stable_vector(cg3) != nullptr &&
                                     s.actor_as<Server>("A2").stable_vector(cg3) == nullptr &&
                                     s.actor_as<Server>("B1").stable_vector(cg3) == nullptr &&
                                     s.actor_as<Server>("A2").stable_vector(cg4) != nullptr;
  });
  sim->at(1500, [&](sim::Simulator& s) {
    out.svv_dropped_after_removal = s.actor_as<Server>("A2").stable_vector(cg4) == nullptr &&
                                    s.actor_as<Server>("B1").stable_vector(cg4) == nullptr;
  });

  using Op = workloads::ScriptedOp;
  std::vector<Op> writer;
  for (int i = 0; i < 200; ++i) {
    const bool a = i % 2 == 0;
    Op op;
    op.kind = Op::Kind::kPut;
    op.key = a ? kAppKeyA : kAppKeyB;
    op.server = a ? kA2 : kB2;
    op.value = std::to_string(i);
    op.think_ms = 5;
    writer.push_back(op);
  }
  std::vector<Op> mover;
  for (int i = 0; i < 60; ++i) {
    const bool moved = i >= 20;
    const bool a = i % 2 == 0;
    Op op;
    op.key = a ? kAppKeyA : kAppKeyB;
    op.server = moved ? (a ? kA1 : kB2) : (a ? kA1 : kB1);
    op.cg = moved ? cg3 : cg1;
    op.think_ms = 10;
    if (i == 20) op.not_before = 700;
    mover.push_back(op);
  }
  std::vector<Op> stale_user;
  {
    Op op;
    op.key = kAppKeyB;
    op.server = kB1;
    op.cg = cg4;
    op.fallback_cg = cg1;
    op.not_before = 1500;
    stale_user.push_back(op);
  }
  sim->add_actor("W", sim::ActorKind::kClient, {}, std::make_unique<workloads::ScriptedClient>(ClientId{"W"}, writer));
  sim->add_actor("M", sim::ActorKind::kClient, {}, std::make_unique<workloads::ScriptedClient>(ClientId{"M"}, mover));
  sim->add_actor("U", sim::ActorKind::kClient, {},
                 std::make_unique<workloads::ScriptedClient>(ClientId{"U"}, stale_user));
  sim->run_until(5000);

  out.unknown_cg_errors = sim->actor_as<workloads::ScriptedClient>("U").unknown_cg_errors();
  out.trace = sim->take_trace();
  for (const auto& r : out.trace) {
    if (r.kind == TraceKind::kGetReply && r.cg == cg3.str() && r.status == "OK") ++out.cg3_reads_ok;
  }
  out.report = checker::check_trace(out.trace);
  return out;
}

}  // namespace accf::experiments
