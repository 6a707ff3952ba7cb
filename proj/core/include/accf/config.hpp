#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "accf/grouping.hpp"
#include "accf/network.hpp"

namespace accf {

enum class ReadFallback {
  /// Serve the latest version whose ds is within SVV[cg] joined with the
  /// request's ds.
  kStableJoin,
  /// Serve the latest version in the chain whenever the request's ds is not
  /// within SVV[cg].
  kLatest,
};

std::string_view to_string(ReadFallback fallback);
ReadFallback parse_read_fallback(std::string_view text);

struct ProtocolParams {
  std::int64_t heartbeat_ms = 10;
  std::int64_t gossip_ms = 10;
  /// Parked GETs give up after this long; 0 disables the timeout.
  std::int64_t get_timeout_ms = 0;
  ReadFallback fallback = ReadFallback::kStableJoin;

  bool operator==(const ProtocolParams&) const = default;
};

struct SystemConfig {
  static constexpr int kSchemaVersion = 1;

  int version = kSchemaVersion;
  GroupConfig groups;
  sim::DelayModel network;
  ProtocolParams protocol;

  bool operator==(const SystemConfig&) const = default;
};

/// Parse or schema error. `line` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& message, int line);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

SystemConfig parse_config(std::string_view text);
SystemConfig load_config(const std::filesystem::path& path);

/// Deterministic YAML rendering; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SystemConfig& config);

/// A config built from a topology and preset name with default network and
/// protocol settings.
SystemConfig make_system_config(const Topology& topology, std::string_view preset_name);

}  // namespace accf
