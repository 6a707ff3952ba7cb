#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "accf/checker.hpp"
#include "accf/config.hpp"
#include "accf/simulator.hpp"
#include "accf/workloads.hpp"

namespace accf::experiments {

using sim::SimTime;

enum class App { kApp1, kApp2 };

std::string_view to_string(App app);
App parse_app(std::string_view text);

/// Workload knobs. None of these are taken from measured deployments; they are
/// declared defaults for simulation.
struct WorkloadSpec {
  SimTime duration_ms = 30'000;
  /// Leading fraction of the run excluded from measurement.
  double warmup_fraction = 0.1;
  /// App1 retry interval when the awaited value is not visible yet.
  SimTime poll_ms = 5;
  /// App2 writer pause between PUTs.
  SimTime writer_pause_ms = 5;
  /// App2 reader pause between GETs.
  SimTime reader_pause_ms = 0;
};

struct Window {
  SimTime begin = 0;
  SimTime end = 0;
};

struct Measurement {
  std::size_t completed = 0;
  double throughput = 0.0;  // units per simulated second
  double mean_staleness_ms = 0.0;
  double mean_park_ms = 0.0;
  std::size_t parks = 0;
};

/// Counts records matching `unit` inside the window, plus staleness
/// (reply time - wt.l over successful GET_REPLY records) and park durations
/// (GET_PARK to the same client's next GET_REPLY). Throws
/// std::invalid_argument for an empty window.
Measurement measure(const Trace& trace, Window window,
                    const std::function<bool(const TraceRecord&)>& unit);

struct ExperimentResult {
  std::string app;
  std::string grouping;
  SimTime delay_ms = 0;
  std::uint64_t seed = 0;
  double throughput = 0.0;
  double normalized = 0.0;
  double mean_park_ms = 0.0;
  double mean_staleness_ms = 0.0;
  std::size_t parks = 0;
  std::size_t completed = 0;
};

struct RunOutput {
  ExperimentResult result;
  Trace trace;
  checker::Report report;
  sim::SimStats stats;
};

/// App1: two clients ping-pong a counter through A1 and A2 while every
/// message B1 sends to another server is delayed by `delay_b1`. Throughput is
/// increments per simulated second. Throws GroupingError for a topology
/// without A1/A2/B1.
RunOutput run_app1(const SystemConfig& config, SimTime delay_b1, std::uint64_t seed,
                   const WorkloadSpec& spec);

/// App1 on the two-server {A1, A2} restriction of `config`.
RunOutput run_app1_baseline(const SystemConfig& config, std::uint64_t seed,
                            const WorkloadSpec& spec);

/// App2: a writer alternates PUTs on A2 and B2 while a reader alternates GETs
/// on A1 and B1; B2's messages to other servers are delayed by `delay_b2`.
/// Throughput is reader GETs per simulated second.
RunOutput run_app2(const SystemConfig& config, SimTime delay_b2, std::uint64_t seed,
                   const WorkloadSpec& spec);

/// App2 with the writer disabled.
RunOutput run_app2_baseline(const SystemConfig& config, std::uint64_t seed,
                            const WorkloadSpec& spec);

/// `config` reduced to the given servers (groups and host sets intersected,
/// empty ones dropped).
SystemConfig restrict_to(const SystemConfig& config, const std::set<ServerId>& keep);

class SweepAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepOptions {
  /// Network and protocol settings; the grouping comes from the preset names.
  SystemConfig base = make_system_config(four_server_topology(), "two-by-two");
  WorkloadSpec workload;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool keep_traces = false;
};

struct SweepCell {
  std::string grouping;
  SimTime delay_ms = 0;
  double mean_normalized = 0.0;
  double min_normalized = 0.0;
  double max_normalized = 0.0;
};

struct SweepTable {
  App app = App::kApp1;
  std::vector<ExperimentResult> rows;
  /// One per grouping; throughput averaged over seeds, normalized = 1.
  std::vector<ExperimentResult> baselines;
  std::vector<SweepCell> cells;
  /// (grouping, delay, seed) -> trace, when keep_traces is set.
  std::map<std::tuple<std::string, SimTime, std::uint64_t>, Trace> traces;

  const SweepCell& cell(const std::string& grouping, SimTime delay) const;
};

/// Every (grouping, delay, seed) run plus per-grouping baselines. Each run's
/// trace must pass the checker; a violation throws SweepAborted.
SweepTable sweep(App app, const std::vector<std::string>& groupings,
                 const std::vector<SimTime>& delays, const std::vector<std::uint64_t>& seeds,
                 const SweepOptions& options);

inline constexpr std::string_view kCsvHeader =
    "app,grouping,delay_ms,seed,throughput,normalized,mean_park_ms,mean_staleness_ms";

/// Header plus baseline rows (delay_ms "baseline", seed "all") then run rows.
std::string sweep_csv(const SweepTable& table);

/// "# delay_ms normalized_mean normalized_min normalized_max" then one line per
/// delay, for one grouping.
std::string plot_data(const SweepTable& table, const std::string& grouping);

std::vector<SimTime> default_delays();

// Randomized scenarios ------------------------------------------------------

struct RandomLimits {
  int max_servers = 6;
  int max_clients = 4;
  int max_ops = 500;
  /// Readers stay inside one checking group and never write; writers never
  /// read. Used for the no-blocking property.
  bool single_checking_group = false;
  /// Allow non-FIFO links with duplication.
  bool allow_non_fifo = true;
};

struct RandomScenario {
  SystemConfig config;
  std::map<ClientId, std::vector<workloads::ScriptedOp>> clients;
  SimTime duration_ms = 0;
  std::uint64_t seed = 0;
};

RandomScenario random_scenario(std::uint64_t seed, const RandomLimits& limits);

struct ScenarioOutput {
  Trace trace;
  checker::Report report;
  sim::SimStats stats;
  std::size_t ops_planned = 0;
  std::size_t ops_completed = 0;
  std::uint64_t parked_total = 0;
};

ScenarioOutput run_scenario(const RandomScenario& scenario);

/// Scripted reconfiguration: on a two-by-two system, adds checking group
/// "cg3" = {A1, B2} mid-run, moves a client onto it after the first gossip
/// round, adds and later removes an unused group "cg4", and has one client
/// name cg4 after removal so the unknown-group error is exercised.
struct ReconfigOutput {
  Trace trace;
  checker::Report report;
  std::size_t unknown_cg_errors = 0;
  std::size_t cg3_reads_ok = 0;
  bool removal_guard_rejected = false;
  bool svv_initialized_on_members = false;
  bool svv_dropped_after_removal = false;
};

ReconfigOutput run_reconfiguration_scenario(std::uint64_t seed);

/// Builds a simulator with one Server per configured server.
std::unique_ptr<sim::Simulator> make_simulator(const SystemConfig& config, std::uint64_t seed);

}  // namespace accf::experiments
