#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "accf/message.hpp"
#include "accf/network.hpp"
#include "accf/trace.hpp"

namespace accf::sim {

using TimerId = std::uint64_t;

enum class ActorKind { kServer, kClient };

/// What a handler may do. Implemented by the simulator; unit tests supply a
/// recording implementation.
class Context {
 public:
  virtual ~Context() = default;

  virtual SimTime now() const = 0;
  /// The calling actor's (possibly skewed) physical clock.
  virtual std::int64_t physical_now() const = 0;
  virtual const std::string& self() const = 0;

  virtual void send(const std::string& to, Payload payload, std::uint64_t link_seq = 0) = 0;
  virtual void record(TraceRecord record) = 0;

  virtual TimerId schedule_once(SimTime delay, std::uint64_t tag) = 0;
  /// Fires at now+period, now+2*period, ... Throws std::invalid_argument for
  /// period <= 0.
  virtual TimerId schedule_periodic(SimTime period, std::uint64_t tag) = 0;
  virtual void cancel_timer(TimerId id) = 0;
};

class Actor {
 public:
  virtual ~Actor() = default;
  virtual void start(Context&) {}
  virtual void receive(const Envelope& envelope, Context& ctx) = 0;
  virtual void timer(std::uint64_t /*tag*/, Context&) {}
};

struct SimStats {
  std::uint64_t sent = 0;
  std::uint64_t duplicated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t in_flight = 0;
  std::uint64_t timer_fires = 0;
};

/// Deterministic discrete-event simulator. Events fire in (time, sequence)
/// order; the same actors, delay model and seed produce the same trace.
class Simulator {
 public:
  Simulator(DelayModel delays, std::uint64_t seed);
  ~Simulator();

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Registers an actor; its start() runs at the current time in
  /// registration order.
  void add_actor(const std::string& name, ActorKind kind, ClockModel clock,
                 std::unique_ptr<Actor> actor);

  bool has_actor(const std::string& name) const { return actors_.contains(name); }
  Actor& actor(const std::string& name);
  template <class T>
  T& actor_as(const std::string& name) {
    return dynamic_cast<T&>(actor(name));
  }

  /// Sends `payload` from `from` (which need not be a registered actor, e.g.
  /// "control") at absolute time `at`, subject to the delay model.
  void inject(SimTime at, const std::string& from, const std::string& to, Payload payload);

  /// Runs `fn` at absolute time `at`. Throws std::logic_error for past times.
  void at(SimTime at, std::function<void(Simulator&)> fn);

  /// Processes every event with time <= end, then sets the clock to `end`.
  void run_until(SimTime end);

  SimTime now() const noexcept { return now_; }
  const Trace& trace() const noexcept { return trace_; }
  Trace take_trace() { return std::move(trace_); }
  SimStats stats() const;

  /// Delivery time the delay model would assign right now (advances RNG).
  SimTime delivery_time(const std::string& from, const std::string& to);

 private:
  class ActorContext;
  struct ActorSlot;

  struct Deliver {
    Envelope envelope;
  };
  struct Fire {
    TimerId id;
  };
  struct Start {
    std::string actor;
  };
  struct Control {
    std::function<void(Simulator&)> fn;
  };
  struct Event {
    SimTime time;
    std::uint64_t seq;
    std::variant<Deliver, Fire, Start, Control> what;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };
  struct TimerInfo {
    std::string actor;
    SimTime period = 0;
    std::uint64_t tag = 0;
  };

  void push(SimTime time, decltype(Event::what) what);
  void send_from(const std::string& from, const std::string& to, Payload payload,
                 std::uint64_t link_seq);
  bool is_client(const std::string& name) const;
  ActorContext& context_for(const std::string& name);
  TimerId add_timer(const std::string& actor, SimTime delay, SimTime period, std::uint64_t tag);

  DelayModel delays_;
  std::mt19937_64 rng_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  TimerId next_timer_ = 1;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::map<std::string, std::unique_ptr<ActorSlot>> actors_;
  std::map<TimerId, TimerInfo> timers_;
  std::map<std::pair<std::string, std::string>, SimTime> last_delivery_;
  Trace trace_;
  SimStats stats_;
};

}  // namespace accf::sim
