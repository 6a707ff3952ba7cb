#pragma once

#include <cstdint>

#include "accf/timestamp.hpp"

namespace accf {

/// Per-server hybrid logical clock. The physical reading is supplied by the
/// caller on every call; the clock never reads time on its own.
class HybridLogicalClock {
 public:
  HybridLogicalClock() = default;
  explicit HybridLogicalClock(HlcTimestamp initial) : current_(initial) {}

  /// Timestamp for a new write whose dependencies peak at `dependency_max`.
  /// The result is strictly greater than both `dependency_max` and every
  /// previously returned value.
  HlcTimestamp update_for_put(std::int64_t physical_ms, HlcTimestamp dependency_max);

  /// Dependency-free advance, used for heartbeats.
  HlcTimestamp tick(std::int64_t physical_ms);

  HlcTimestamp current() const noexcept { return current_; }

 private:
  HlcTimestamp current_{};
};

}  // namespace accf
