#include "accf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace accf::sim {

std::int64_t ClockModel::physical(SimTime t) const {
  long double reading = static_cast<long double>(t) * (1.0L + drift) + offset_ms;
  return std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(reading)));
}

std::int64_t DelayModel::base_latency(const std::string& from, const std::string& to,
                                      bool involves_client) const {
  if (auto it = latency.find({from, to}); it != latency.end()) return it->second;
  return involves_client ? client_latency_ms : default_latency_ms;
}

class Simulator::ActorContext final : public Context {
 public:
  ActorContext(Simulator& sim, std::string name, ClockModel clock)
      : sim_(sim), name_(std::move(name)), clock_(clock) {}

  SimTime now() const override { return sim_.now_; }
  std::int64_t physical_now() const override { return clock_.physical(sim_.now_); }
  const std::string& self() const override { return name_; }

  void send(const std::string& to, Payload payload, std::uint64_t link_seq) override {
    sim_.send_from(name_, to, std::move(payload), link_seq);
  }

  void record(TraceRecord record) override {
    record.time = sim_.now_;
    sim_.trace_.push_back(std::move(record));
  }

  TimerId schedule_once(SimTime delay, std::uint64_t tag) override {
    if (delay < 0) throw std::invalid_argument("negative timer delay");
    return sim_.add_timer(name_, delay, 0, tag);
  }

  TimerId schedule_periodic(SimTime period, std::uint64_t tag) override {
    if (period <= 0) throw std::invalid_argument("timer period must be positive");
    return sim_.add_timer(name_, period, period, tag);
  }

  void cancel_timer(TimerId id) override { sim_.timers_.erase(id); }

 private:
  Simulator& sim_;
  std::string name_;
  ClockModel clock_;
};

struct Simulator::ActorSlot {
  ActorKind kind;
  std::unique_ptr<Actor> actor;
  ActorContext context;
};

Simulator::Simulator(DelayModel delays, std::uint64_t seed)
    : delays_(std::move(delays)), rng_(seed) {}

Simulator::~Simulator() = default;

void Simulator::add_actor(const std::string& name, ActorKind kind, ClockModel clock,
                          std::unique_ptr<Actor> actor) {
  if (actors_.contains(name)) throw std::invalid_argument("duplicate actor '" + name + "'");
  actors_.emplace(name, std::make_unique<ActorSlot>(
                            ActorSlot{kind, std::move(actor), ActorContext(*this, name, clock)}));
  push(now_, Start{name});
}

Actor& Simulator::actor(const std::string& name) {
  auto it = actors_.find(name);
  if (it == actors_.end()) throw std::out_of_range("no actor '" + name + "'");
  return *it->second->actor;
}

bool Simulator::is_client(const std::string& name) const {
  auto it = actors_.find(name);
  return it != actors_.end() && it->second->kind == ActorKind::kClient;
}

Simulator::ActorContext& Simulator::context_for(const std::string& name) {
  return actors_.at(name)->context;
}

void Simulator::push(SimTime time, decltype(Event::what) what) {
  if (time < now_) {
    throw std::logic_error("event scheduled in the past (" + std::to_string(time) + " < " +
                           std::to_string(now_) + ")");
  }
  queue_.push(Event{time, next_seq_++, std::move(what)});
}

SimTime Simulator::delivery_time(const std::string& from, const std::string& to) {
  const bool client_link = is_client(from) || is_client(to);
  SimTime delay = delays_.base_latency(from, to, client_link);
  if (auto it = delays_.extra_ms.find(from); it != delays_.extra_ms.end()) delay += it->second;
  if (delays_.jitter_ms > 0) {
    delay += static_cast<SimTime>(rng_() % static_cast<std::uint64_t>(delays_.jitter_ms));
  }
  SimTime at = now_ + delay;
  if (delays_.fifo) {
    auto& last = last_delivery_[{from, to}];
    at = std::max(at, last);
    last = at;
  }
  return at;
}

void Simulator::send_from(const std::string& from, const std::string& to, Payload payload,
                          std::uint64_t link_seq) {
  if (!actors_.contains(to)) throw std::invalid_argument("send to unknown actor '" + to + "'");
  const bool server_link = !is_client(from) && !is_client(to) && actors_.contains(from);
  Envelope envelope{from, to, link_seq, std::move(payload)};

  if (!delays_.fifo && server_link && delays_.duplicate_probability > 0.0) {
    double draw = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    if (draw < delays_.duplicate_probability) {
      ++stats_.duplicated;
      push(delivery_time(from, to), Deliver{envelope});
    }
  }
  ++stats_.sent;
  push(delivery_time(from, to), Deliver{std::move(envelope)});
}

TimerId Simulator::add_timer(const std::string& actor, SimTime delay, SimTime period,
                             std::uint64_t tag) {
  TimerId id = next_timer_++;
  timers_.emplace(id, TimerInfo{actor, period, tag});
  push(now_ + delay, Fire{id});
  return id;
}

void Simulator::inject(SimTime at, const std::string& from, const std::string& to, Payload payload) {
  if (at < now_) throw std::logic_error("inject in the past");
  push(at, Control{[from, to, payload = std::move(payload)](Simulator& sim) mutable {
    sim.send_from(from, to, std::move(payload), 0);
  }});
}

void Simulator::at(SimTime at, std::function<void(Simulator&)> fn) {
  if (at < now_) throw std::logic_error("event scheduled in the past");
  push(at, Control{std::move(fn)});
}

void Simulator::run_until(SimTime end) {
  while (!queue_.empty() && queue_.top().time <= end) {
    Event event = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    if (event.time < now_) throw std::logic_error("simulated time went backwards");
    now_ = event.time;

    if (auto* deliver = std::get_if<Deliver>(&event.what)) {
      ++stats_.delivered;
      auto& slot = *actors_.at(deliver->envelope.to);
      slot.actor->receive(deliver->envelope, slot.context);
    } else if (auto* fire = std::get_if<Fire>(&event.what)) {
      auto it = timers_.find(fire->id);
      if (it == timers_.end()) continue;  // cancelled
      TimerInfo info = it->second;
      if (info.period > 0) {
        push(now_ + info.period, Fire{fire->id});
      } else {
        timers_.erase(it);
      }
      ++stats_.timer_fires;
      auto& slot = *actors_.at(info.actor);
      slot.actor->timer(info.tag, slot.context);
    } else if (auto* start = std::get_if<Start>(&event.what)) {
      auto& slot = *actors_.at(start->actor);
      slot.actor->start(slot.context);
    } else {
      std::get<Control>(event.what).fn(*this);
    }
  }
  now_ = std::max(now_, end);
}

SimStats Simulator::stats() const {
  SimStats out = stats_;
  out.in_flight = out.sent + out.duplicated - out.delivered;
  return out;
}

}  // namespace accf::sim
