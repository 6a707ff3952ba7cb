// Acceptance checks; prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "accf/experiments.hpp"
#include "accf/hlc.hpp"
#include "golden.hpp"
#include "mutations.hpp"

namespace {

using namespace accf;
using experiments::App;
using experiments::SimTime;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

int failures = 0;

void report(int number, const std::string& title, const Outcome& outcome, double elapsed) {
  if (!outcome.pass) ++failures;
  std::printf("%s criterion %d: %s (%s s)%s%s\n", outcome.pass ? "PASS" : "FAIL", number, title.c_str(),
              fmt(elapsed).c_str(), outcome.detail.empty() ? "" : ": ", outcome.detail.c_str());
  std::fflush(stdout);
}

experiments::SweepTable run_sweep(App app) {
  experiments::SweepOptions options;
  return experiments::sweep(app, {"two-by-two", "four-by-one"}, experiments::default_delays(), {1, 2, 3}, options);
}

std::string cells_summary(const experiments::SweepTable& table, const std::string& grouping) {
  std::string out = grouping + " [";
  for (const auto& c : table.cells) {
    if (c.grouping != grouping) continue;
    out += " " + std::to_string(c.delay_ms) + ":" + fmt(c.min_normalized) + ".." + fmt(c.max_normalized);
  }
  return out + " ]";
}

// 1 ---------------------------------------------------------------------------

Outcome app1_shape() {
  Outcome o;
  auto table = run_sweep(App::kApp1);
  for (const auto& c : table.cells) {
    if (c.grouping == "four-by-one" && c.min_normalized < 0.9) {
      o.fail("four-by-one at " + std::to_string(c.delay_ms) + " ms: " + fmt(c.min_normalized) + " < 0.9");
    }
    if (c.grouping == "two-by-two" && c.delay_ms >= 500 && c.max_normalized > 0.5) {
      o.fail("two-by-two at " + std::to_string(c.delay_ms) + " ms: " + fmt(c.max_normalized) + " > 0.5");
    }
  }
  if (o.pass) o.detail = cells_summary(table, "four-by-one") + " " + cells_summary(table, "two-by-two");
  return o;
}

// 2 ---------------------------------------------------------------------------

Outcome app2_shape() {
  Outcome o;
  auto table = run_sweep(App::kApp2);
  double previous = 0.0;
  bool first = true;
  for (const auto& c : table.cells) {
    if (c.grouping == "two-by-two" && c.min_normalized < 0.9) {
      o.fail("two-by-two at " + std::to_string(c.delay_ms) + " ms: " + fmt(c.min_normalized) + " < 0.9");
    }
    if (c.grouping != "four-by-one") continue;
    if (!first && !(c.mean_normalized < previous)) {
      o.fail("four-by-one not strictly decreasing at " + std::to_string(c.delay_ms) + " ms: " +
             fmt(c.mean_normalized) + " >= " + fmt(previous));
    }
    if (c.delay_ms >= 500 && c.max_normalized > 0.5) {
      o.fail("four-by-one at " + std::to_string(c.delay_ms) + " ms: " + fmt(c.max_normalized) + " > 0.5");
    }
    previous = c.mean_normalized;
    first = false;
  }
  if (o.pass) o.detail = cells_summary(table, "two-by-two") + " " + cells_summary(table, "four-by-one");
  return o;
}

// 3-6 share the randomized runs; each trace is checked and then dropped -------

struct RandomChecks {
  Outcome soundness;
  Outcome no_park;
  Outcome write_order;
  Outcome vectors;
  std::size_t runs = 0;
  std::size_t reads = 0;
  std::size_t gets = 0;
  std::size_t forged = 0;
  std::size_t flagged = 0;
  std::map<checker::FindingKind, std::size_t> kinds;
  std::size_t writes = 0;
  std::size_t gossip_events = 0;
};

void check_clean(const experiments::RandomScenario& scenario, const experiments::ScenarioOutput& output,
                 RandomChecks& c) {
  const auto seed = std::to_string(scenario.seed);
  c.reads += output.report.reads_checked;
  if (!output.report.ok()) c.soundness.fail("seed " + seed + ": " + checker::format_report(output.report));
  if (output.ops_completed != output.ops_planned) {
    c.soundness.fail("seed " + seed + ": only " + std::to_string(output.ops_completed) + " of " +
                     std::to_string(output.ops_planned) + " ops completed");
  }
}

void check_forgeries(const experiments::RandomScenario& scenario, const Trace& trace, RandomChecks& c) {
  for (const auto& m : testing::forge_all(trace, scenario.seed)) {
    ++c.forged;
    ++c.kinds[m.expected];
    if (checker::check_trace(m.trace).count(m.expected) > 0) {
      ++c.flagged;
    } else {
      c.soundness.fail("seed " + std::to_string(scenario.seed) + ": forgery not flagged: " + m.description);
    }
  }
}

void check_parks(const experiments::RandomScenario& scenario, const experiments::ScenarioOutput& output,
                 RandomChecks& c) {
  std::size_t parks = 0;
  for (const auto& r : output.trace) {
    parks += r.kind == TraceKind::kGetPark;
    c.gets += r.kind == TraceKind::kGetReq;
  }
  const auto seed = std::to_string(scenario.seed);
  if (parks != 0 || output.parked_total != 0) {
    c.no_park.fail("seed " + seed + ": " + std::to_string(parks) + " GET_PARK records");
  }
  if (!output.report.ok()) c.no_park.fail("seed " + seed + ": checker violations");
}

void check_write_order(const experiments::RandomScenario& scenario, const experiments::ScenarioOutput& output,
                       RandomChecks& c) {
  const auto seed = std::to_string(scenario.seed);
  std::map<std::string, HlcTimestamp> last;
  for (const auto& r : output.trace) {
    if (r.kind != TraceKind::kPutReq || r.status != "OK") continue;
    ++c.writes;
    auto [it, fresh] = last.try_emplace(r.actor, *r.wt);
    if (!fresh) {
      if (!(*r.wt > it->second)) {
        c.write_order.fail("seed " + seed + " server " + r.actor + ": write time " + to_string(*r.wt) +
                           " after " + to_string(it->second));
        return;
      }
      it->second = *r.wt;
    }
    for (const auto& [group, ts] : r.ds) {
      if (ts > *r.wt) {
        c.write_order.fail("seed " + seed + ": dependency above write time");
        return;
      }
    }
  }
  if (output.report.count(checker::FindingKind::kHlcOrderViolation) != 0) {
    c.write_order.fail("seed " + seed + ": HLC order violation");
  }
}

void check_vectors(const experiments::RandomScenario& scenario, const Trace& trace, RandomChecks& c) {
  const auto& groups = scenario.config.groups;
  const auto seed = std::to_string(scenario.seed);
  std::map<std::string, VersionVector> last_vv;
  std::map<std::pair<std::string, std::string>, VersionVector> last_svv;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    if (r.kind != TraceKind::kGossip || r.status == "IGNORED") continue;
    ++c.gossip_events;
    const auto where = "seed " + seed + " trace line " + std::to_string(trace_line_of(i));
    const VersionVector vv(r.ds);
    const auto svv_text = detail_field(r.detail, "svv");
    if (!svv_text) {
      c.vectors.fail(where + ": gossip record without svv");
      return;
    }
    const VersionVector svv(parse_entries(*svv_text));
    bool ok = true;
    if (!entrywise_leq(svv, vv)) {
      c.vectors.fail(where + ": SVV " + to_string(svv) + " exceeds VV " + to_string(vv));
      ok = false;
    }
    if (auto it = last_vv.find(r.actor); it != last_vv.end() && !entrywise_leq(it->second, vv)) {
      c.vectors.fail(where + ": VV went backwards");
      ok = false;
    }
    last_vv[r.actor] = vv;
    auto key = std::make_pair(r.actor, r.cg);
    if (auto it = last_svv.find(key); it != last_svv.end() && !entrywise_leq(it->second, svv)) {
      c.vectors.fail(where + ": SVV went backwards");
      ok = false;
    }
    last_svv[key] = svv;
    if (groups.checking.at(CheckingGroupId{r.cg}).size() == 1 && !(svv == vv)) {
      c.vectors.fail(where + ": singleton group SVV " + to_string(svv) + " != VV " + to_string(vv));
      ok = false;
    }
    if (!ok) return;
  }
}

/// Criteria 3, 5 (trace part) and 6 over general scenarios.
RandomChecks general_runs(std::uint64_t first_seed, std::size_t count) {
  RandomChecks c;
  for (std::size_t i = 0; i < count; ++i) {
    const auto scenario = experiments::random_scenario(first_seed + i, {});
    const auto output = experiments::run_scenario(scenario);
    ++c.runs;
    check_clean(scenario, output, c);
    if (c.forged < 200) check_forgeries(scenario, output.trace, c);
    check_write_order(scenario, output, c);
    check_vectors(scenario, output.trace, c);
  }
  if (c.forged < 20) c.soundness.fail("only " + std::to_string(c.forged) + " forgeries could be built");
  if (c.kinds.size() < 5) c.soundness.fail("only " + std::to_string(c.kinds.size()) + " forgery kinds exercised");
  if (c.soundness.pass) {
    c.soundness.detail = std::to_string(c.runs) + " runs clean over " + std::to_string(c.reads) + " reads; " +
                         std::to_string(c.flagged) + "/" + std::to_string(c.forged) + " forgeries flagged";
  }
  if (c.gossip_events == 0) c.vectors.fail("no gossip events recorded");
  if (c.vectors.pass) c.vectors.detail = std::to_string(c.gossip_events) + " gossip events";
  return c;
}

RandomChecks single_group_runs(std::uint64_t first_seed, std::size_t count) {
  RandomChecks c;
  experiments::RandomLimits limits;
  limits.single_checking_group = true;
  for (std::size_t i = 0; i < count; ++i) {
    const auto scenario = experiments::random_scenario(first_seed + i, limits);
    const auto output = experiments::run_scenario(scenario);
    ++c.runs;
    check_parks(scenario, output, c);
  }
  if (c.no_park.pass) c.no_park.detail = std::to_string(c.runs) + " runs, " + std::to_string(c.gets) + " GETs, 0 parked";
  return c;
}

HlcTimestamp succ(HlcTimestamp t) { return {t.l, t.c + 1}; }

Outcome hlc_properties(const RandomChecks& traces) {
  Outcome o = traces.write_order;
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::int64_t> small(0, 40);
  constexpr int kCases = 20'000;
  for (int i = 0; i < kCases; ++i) {
    const HlcTimestamp prev{small(rng), small(rng) % 6};
    const HlcTimestamp dt{small(rng), small(rng) % 6};
    const std::int64_t pc = small(rng);
    HybridLogicalClock clock(prev);
    const auto got = clock.update_for_put(pc, dt);
    const auto expected = std::max(HlcTimestamp{pc, 0}, succ(std::max(prev, dt)));
    if (got != expected || !(got > prev) || !(got > dt) || clock.current() != got) {
      o.fail("update_for_put(" + to_string(prev) + ", pc=" + std::to_string(pc) + ", dt=" + to_string(dt) +
             ") = " + to_string(got) + ", expected " + to_string(expected));
      break;
    }
    HybridLogicalClock ticker(prev);
    const auto ticked = ticker.tick(pc);
    if (ticked != std::max(HlcTimestamp{pc, 0}, succ(prev))) {
      o.fail("tick(" + to_string(prev) + ", pc=" + std::to_string(pc) + ") = " + to_string(ticked));
      break;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(kCases) + " generated cases; " + std::to_string(traces.writes) +
               " writes strictly increasing per server";
  }
  return o;
}

// 7 ---------------------------------------------------------------------------

Outcome determinism() {
  Outcome o;
  auto config = make_system_config(four_server_topology(), "two-by-two");
  experiments::WorkloadSpec spec;
  const auto a = render_trace(experiments::run_app1(config, 500, 1, spec).trace);
  const auto b = render_trace(experiments::run_app1(config, 500, 1, spec).trace);
  if (a != b) o.fail("app1 reruns differ");

  auto jittered = make_system_config(four_server_topology(), "four-by-one");
  jittered.network.jitter_ms = 9;
  if (render_trace(experiments::run_app2(jittered, 250, 2, spec).trace) !=
      render_trace(experiments::run_app2(jittered, 250, 2, spec).trace)) {
    o.fail("app2 reruns with jitter differ");
  }
  for (std::uint64_t seed : {5, 6, 7}) {
    auto scenario = experiments::random_scenario(seed, {});
    if (render_trace(experiments::run_scenario(scenario).trace) !=
        render_trace(experiments::run_scenario(scenario).trace)) {
      o.fail("random scenario " + std::to_string(seed) + " reruns differ");
    }
  }
  if (auto diff = testing::compare_with_golden(testing::golden_run()); !diff.empty()) o.fail(diff);
  if (o.pass) o.detail = "reruns byte-identical; golden trace matches " + testing::golden_path().filename().string();
  return o;
}

// 8 ---------------------------------------------------------------------------

Outcome reconfiguration() {
  Outcome o;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = std::to_string(seed);
    auto out = experiments::run_reconfiguration_scenario(seed);
    if (!out.report.ok()) o.fail("seed " + s + ": " + checker::format_report(out.report));
    if (out.cg3_reads_ok == 0) o.fail("seed " + s + ": no reads served through the added group");
    if (out.unknown_cg_errors != 1) o.fail("seed " + s + ": removed group not reported as unknown");
    if (!out.svv_initialized_on_members) o.fail("seed " + s + ": stable vectors not initialized");
    if (!out.svv_dropped_after_removal) o.fail("seed " + s + ": stable vectors not dropped");
    if (!out.removal_guard_rejected) o.fail("seed " + s + ": removal emptying a checking set was accepted");
  }
  auto base = preset("two-by-two", four_server_topology());
  try {
    remove_checking_group(base, CheckingGroupId{"cg1"});
    o.fail("removing cg1 from two-by-two was accepted");
  } catch (const GroupingError&) {
  }
  if (o.pass) o.detail = "3 seeds: group added and used, unused group removed, guard holds";
  return o;
}

}  // namespace

template <class F>
void timed(int number, const std::string& title, F&& body) {
  const auto start = Clock::now();
  const Outcome outcome = body();
  report(number, title, outcome, seconds_since(start));
}

int main() {
  timed(1, "App1 normalized throughput by grouping", app1_shape);
  timed(2, "App2 normalized throughput by grouping", app2_shape);

  auto start = Clock::now();
  const auto general = general_runs(1, 120);
  report(3, "checker clean on randomized runs and flags forged traces", general.soundness, seconds_since(start));

  start = Clock::now();
  const auto single = single_group_runs(10'001, 60);
  report(4, "no GET parks for single-checking-group readers", single.no_park, seconds_since(start));

  timed(5, "HLC properties and per-server write time order", [&] { return hlc_properties(general); });
  timed(6, "SVV <= VV, both monotone, singleton SVV == VV", [&] { return general.vectors; });
  timed(7, "determinism and golden trace", determinism);
  timed(8, "checking group add/remove at runtime", reconfiguration);

  std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
