#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace accf::sim {

using SimTime = std::int64_t;

/// pc(t) = t * (1 + drift) + offset, floored, never negative.
struct ClockModel {
  std::int64_t offset_ms = 0;
  double drift = 0.0;

  std::int64_t physical(SimTime t) const;

  bool operator==(const ClockModel&) const = default;
};

/// Message delay: base latency + per-sender extra + seeded jitter.
struct DelayModel {
  std::int64_t default_latency_ms = 10;
  /// Latency used when either endpoint is a client.
  std::int64_t client_latency_ms = 1;
  /// Directed overrides, (from, to) -> ms.
  std::map<std::pair<std::string, std::string>, std::int64_t> latency;
  /// Added to every message sent by the named actor.
  std::map<std::string, std::int64_t> extra_ms;
  /// Uniform jitter in [0, jitter_ms).
  std::int64_t jitter_ms = 0;
  /// Per-link FIFO delivery. When false, links may reorder and server-to-server
  /// messages may be duplicated with `duplicate_probability`.
  bool fifo = true;
  double duplicate_probability = 0.0;

  std::int64_t base_latency(const std::string& from, const std::string& to,
                            bool involves_client) const;

  bool operator==(const DelayModel&) const = default;
};

}  // namespace accf::sim
