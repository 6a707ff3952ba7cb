#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

namespace accf {

/// Hybrid logical clock value. `l` is in simulated milliseconds, `c` is the
/// logical counter. Ordered lexicographically.
struct HlcTimestamp {
  std::int64_t l = 0;
  std::int64_t c = 0;

  /// Version-vector sentinel for "no key-sharing peer in this group".
  static constexpr HlcTimestamp infinity() noexcept {
    return {std::numeric_limits<std::int64_t>::max(),
            std::numeric_limits<std::int64_t>::max()};
  }
  constexpr bool is_infinite() const noexcept { return *this == infinity(); }

  auto operator<=>(const HlcTimestamp&) const = default;
  bool operator==(const HlcTimestamp&) const = default;
};

/// Renders "l.c", or "inf" for the sentinel.
std::string to_string(HlcTimestamp ts);

/// Inverse of to_string. Throws std::invalid_argument on malformed input.
HlcTimestamp parse_timestamp(std::string_view text);

std::ostream& operator<<(std::ostream& os, HlcTimestamp ts);

}  // namespace accf
