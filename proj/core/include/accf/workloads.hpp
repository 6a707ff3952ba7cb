#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "accf/client.hpp"

namespace accf::workloads {

/// One side of the App1 collaboration loop: poll a counter key until the
/// other side's next value shows up, then write value+1.
class PingPongClient final : public ClientActor {
 public:
  struct Options {
    Key key;
    ServerId server;
    CheckingGroupId cg;
    /// The first writer writes 0 on start; the other side polls for it.
    bool writes_first = false;
    sim::SimTime poll_ms = 5;
  };

  PingPongClient(ClientId id, Options options);

  void start(sim::Context& ctx) override;
  void timer(std::uint64_t tag, sim::Context& ctx) override;

  std::int64_t increments() const noexcept { return increments_; }

 protected:
  void on_get(const Key& key, const GetOutcome& outcome, sim::Context& ctx) override;
  void on_put(const Key& key, const PutOutcome& outcome, sim::Context& ctx) override;

 private:
  Options options_;
  std::int64_t awaiting_ = 0;
  std::int64_t increments_ = 0;
};

struct Target {
  Key key;
  ServerId server;
  CheckingGroupId cg;
};

/// App2 writer: PUTs the targets round-robin with a pause between writes.
class RoundRobinWriter final : public ClientActor {
 public:
  RoundRobinWriter(ClientId id, std::vector<Target> targets, sim::SimTime pause_ms);

  void start(sim::Context& ctx) override;
  void timer(std::uint64_t tag, sim::Context& ctx) override;

 protected:
  void on_put(const Key& key, const PutOutcome& outcome, sim::Context& ctx) override;

 private:
  void issue(sim::Context& ctx);

  std::vector<Target> targets_;
  sim::SimTime pause_ms_;
  std::size_t next_ = 0;
  std::uint64_t counter_ = 0;
};

/// App2 reader: GETs the targets round-robin, back to back.
class RoundRobinReader final : public ClientActor {
 public:
  RoundRobinReader(ClientId id, std::vector<Target> targets, sim::SimTime pause_ms);

  void start(sim::Context& ctx) override;
  void timer(std::uint64_t tag, sim::Context& ctx) override;

 protected:
  void on_get(const Key& key, const GetOutcome& outcome, sim::Context& ctx) override;

 private:
  void issue(sim::Context& ctx);

  std::vector<Target> targets_;
  sim::SimTime pause_ms_;
  std::size_t next_ = 0;
};

struct ScriptedOp {
  enum class Kind { kGet, kPut };

  Kind kind = Kind::kGet;
  Key key;
  ServerId server;
  /// GETs only. When the server answers "unknown checking group" the op is
  /// retried once with `fallback_cg`, if set.
  CheckingGroupId cg;
  std::optional<CheckingGroupId> fallback_cg;
  Value value;
  /// Pause before issuing this op.
  sim::SimTime think_ms = 0;
  /// Do not issue before this absolute time.
  sim::SimTime not_before = 0;
};

/// Executes a fixed op list; used for randomized and scripted scenarios.
class ScriptedClient final : public ClientActor {
 public:
  ScriptedClient(ClientId id, std::vector<ScriptedOp> ops);

  void start(sim::Context& ctx) override;
  void timer(std::uint64_t tag, sim::Context& ctx) override;

  std::size_t completed() const noexcept { return done_; }
  bool finished() const noexcept { return done_ == ops_.size(); }
  std::size_t unknown_cg_errors() const noexcept { return unknown_cg_errors_; }
  const std::vector<GetOutcome>& get_outcomes() const noexcept { return get_outcomes_; }

 protected:
  void on_get(const Key& key, const GetOutcome& outcome, sim::Context& ctx) override;
  void on_put(const Key& key, const PutOutcome& outcome, sim::Context& ctx) override;

 private:
  void schedule_next(sim::Context& ctx);
  void issue(sim::Context& ctx);

  std::vector<ScriptedOp> ops_;
  std::size_t done_ = 0;
  bool retrying_ = false;
  std::size_t unknown_cg_errors_ = 0;
  std::vector<GetOutcome> get_outcomes_;
};

}  // namespace accf::workloads
