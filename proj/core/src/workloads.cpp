#include "accf/workloads.hpp"

#include <stdexcept>

namespace accf::workloads {

namespace {

constexpr std::uint64_t kNextOp = 1;

LoadBalancer explicit_routing_only() {
  return [](const Key& key) -> ServerId {
    throw std::logic_error("workload clients route explicitly; no server for " + key);
  };
}

}  // namespace

PingPongClient::PingPongClient(ClientId id, Options options)
    : ClientActor(std::move(id), explicit_routing_only()), options_(std::move(options)) {}

void PingPongClient::start(sim::Context& ctx) {
  if (options_.writes_first) {
    put(options_.key, "0", ctx, options_.server);
  } else {
    get(options_.key, options_.cg, ctx, options_.server);
  }
}

void PingPongClient::timer(std::uint64_t, sim::Context& ctx) {
  get(options_.key, options_.cg, ctx, options_.server);
}

void PingPongClient::on_get(const Key&, const GetOutcome& outcome, sim::Context& ctx) {
  if (outcome.status == ReplyStatus::kOk && outcome.value) {
    const std::int64_t seen = std::stoll(*outcome.value);
    if (seen >= awaiting_) {
      put(options_.key, std::to_string(seen + 1), ctx, options_.server);
      return;
    }
  }
  if (options_.poll_ms > 0) {
    ctx.schedule_once(options_.poll_ms, kNextOp);
  } else {
    get(options_.key, options_.cg, ctx, options_.server);
  }
}

void PingPongClient::on_put(const Key&, const PutOutcome& outcome, sim::Context& ctx) {
  if (outcome.status == ReplyStatus::kOk) {
    ++increments_;
    awaiting_ += increments_ == 1 && options_.writes_first ? 1 : 2;
  }
  get(options_.key, options_.cg, ctx, options_.server);
}

RoundRobinWriter::RoundRobinWriter(ClientId id, std::vector<Target> targets, sim::SimTime pause_ms)
    : ClientActor(std::move(id), explicit_routing_only()), targets_(std::move(targets)), pause_ms_(pause_ms) {}

void RoundRobinWriter::start(sim::Context& ctx) { issue(ctx); }

void RoundRobinWriter::timer(std::uint64_t, sim::Context& ctx) { issue(ctx); }

void RoundRobinWriter::issue(sim::Context& ctx) {
  if (targets_.empty()) return;
  const auto& target = targets_[next_];
  next_ = (next_ + 1) % targets_.size();
  put(target.key, std::to_string(++counter_), ctx, target.server);
}

void RoundRobinWriter::on_put(const Key&, const PutOutcome&, sim::Context& ctx) {
  if (pause_ms_ > 0) {
    ctx.schedule_once(pause_ms_, kNextOp);
  } else {
    issue(ctx);
  }
}

RoundRobinReader::RoundRobinReader(ClientId id, std::vector<Target> targets, sim::SimTime pause_ms)
    : ClientActor(std::move(id), explicit_routing_only()), targets_(std::move(targets)), pause_ms_(pause_ms) {}

void RoundRobinReader::start(sim::Context& ctx) { issue(ctx); }

void RoundRobinReader::timer(std::uint64_t, sim::Context& ctx) { issue(ctx); }

void RoundRobinReader::issue(sim::Context& ctx) {
  if (targets_.empty()) return;
  const auto& target = targets_[next_];
  next_ = (next_ + 1) % targets_.size();
  get(target.key, target.cg, ctx, target.server);
}

void RoundRobinReader::on_get(const Key&, const GetOutcome&, sim::Context& ctx) {
  if (pause_ms_ > 0) {
    ctx.schedule_once(pause_ms_, kNextOp);
  } else {
    issue(ctx);
  }
}

ScriptedClient::ScriptedClient(ClientId id, std::vector<ScriptedOp> ops)
    : ClientActor(std::move(id), explicit_routing_only()), ops_(std::move(ops)) {}

void ScriptedClient::start(sim::Context& ctx) { schedule_next(ctx); }

void ScriptedClient::timer(std::uint64_t, sim::Context& ctx) { issue(ctx); }

void ScriptedClient::schedule_next(sim::Context& ctx) {
  if (finished()) return;
  const auto& op = ops_[done_];
  const sim::SimTime delay = std::max(op.think_ms, op.not_before - ctx.now());
  if (delay > 0) {
    ctx.schedule_once(delay, kNextOp);
  } else {
    issue(ctx);
  }
}

void ScriptedClient::issue(sim::Context& ctx) {
  const auto& op = ops_[done_];
  if (op.kind == ScriptedOp::Kind::kPut) {
    put(op.key, op.value, ctx, op.server);
  } else {
    get(op.key, retrying_ ? *op.fallback_cg : op.cg, ctx, op.server);
  }
}

void ScriptedClient::on_get(const Key&, const GetOutcome& outcome, sim::Context& ctx) {
  if (outcome.status == ReplyStatus::kUnknownCheckingGroup) {
    ++unknown_cg_errors_;
    if (!retrying_ && ops_[done_].fallback_cg) {
      retrying_ = true;
      issue(ctx);
      return;
    }
  }
  retrying_ = false;
  get_outcomes_.push_back(outcome);
  ++done_;
  schedule_next(ctx);
}

void ScriptedClient::on_put(const Key&, const PutOutcome&, sim::Context& ctx) {
  ++done_;
  schedule_next(ctx);
}

}  // namespace accf::workloads
