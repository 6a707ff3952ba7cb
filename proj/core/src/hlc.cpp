#include "accf/hlc.hpp"

#include <algorithm>

namespace accf {

HlcTimestamp HybridLogicalClock::update_for_put(std::int64_t physical_ms,
                                                HlcTimestamp dependency_max) {
  const HlcTimestamp prev = current_;
  const std::int64_t l = std::max({prev.l, physical_ms, dependency_max.l});
  std::int64_t c = 0;
  if (l == prev.l && l == dependency_max.l) {
    c = std::max(prev.c, dependency_max.c) + 1;
  } else if (l == prev.l) {
    c = prev.c + 1;
  } else if (l == dependency_max.l) {
    c = dependency_max.c + 1;
  }
  current_ = {l, c};
  return current_;
}

HlcTimestamp HybridLogicalClock::tick(std::int64_t physical_ms) {
  const HlcTimestamp prev = current_;
  const std::int64_t l = std::max(prev.l, physical_ms);
  current_ = {l, l == prev.l ? prev.c + 1 : 0};
  return current_;
}

}  // namespace accf
