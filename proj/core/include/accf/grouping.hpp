#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "accf/ids.hpp"

namespace accf {

class GroupingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServerInfo {
  ServerId id;
  std::string region;
  /// Replica label used by the per-replica presets ("1", "2", ...).
  std::string replica;
  std::int64_t clock_offset_ms = 0;
  double clock_drift = 0.0;

  bool operator==(const ServerInfo&) const = default;
};

/// Keys belong to the class named by their prefix up to the first '/'; a key
/// without '/' is its own class name. "A/counter" is in class "A".
std::string key_class_of(const Key& key);

/// Servers, data placement H, tracking grouping T and checking grouping C.
/// An immutable snapshot; reconfiguration produces a copy with a higher epoch.
struct GroupConfig {
  std::uint64_t epoch = 0;
  std::map<ServerId, ServerInfo> servers;
  /// Members of each tracking group. T(i) is the unique group containing i.
  std::map<TrackingGroupId, std::set<ServerId>> tracking;
  /// Members of each checking group; C(i) is every group containing i.
  std::map<CheckingGroupId, std::set<ServerId>> checking;
  /// Key class name -> host set.
  std::map<std::string, std::set<ServerId>> placement;

  bool operator==(const GroupConfig&) const = default;

  bool has_server(const ServerId& id) const { return servers.contains(id); }

  /// T(i). Throws GroupingError unless exactly one group contains `server`.
  TrackingGroupId tracking_group(const ServerId& server) const;

  /// C(i), possibly empty for an invalid config.
  std::set<CheckingGroupId> checking_groups(const ServerId& server) const;

  /// H(k). Throws GroupingError for keys outside every class.
  const std::set<ServerId>& hosts(const Key& key) const;

  bool hosts_key(const ServerId& server, const Key& key) const;

  /// Servers j != i that host some key class together with i.
  std::set<ServerId> key_sharing_peers(const ServerId& server) const;

  /// Members of every checking group of `server`, excluding itself.
  std::set<ServerId> checking_peers(const ServerId& server) const;
};

bool shares_key(const GroupConfig& config, const ServerId& i, const ServerId& j);

enum class ViolationKind {
  kNoServers,
  kInvalidIdentifier,
  kMissingTrackingGroup,
  kMultipleTrackingGroups,
  kEmptyTrackingGroup,
  kEmptyCheckingSet,
  kEmptyCheckingGroup,
  kUnknownServer,
  kEmptyHostSet,
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

std::string_view to_string(ViolationKind kind);

/// Every broken input constraint; an empty result means the config is usable.
std::vector<Violation> validate(const GroupConfig& config);

/// Servers plus placement, before any grouping is chosen.
struct Topology {
  std::map<ServerId, ServerInfo> servers;
  std::map<std::string, std::set<ServerId>> placement;
};

/// A1, B1 in replica "1"; A2, B2 in replica "2"; classes A={A1,A2}, B={B1,B2}.
Topology four_server_topology();

/// The names accepted by preset(), canonical spelling first.
std::vector<std::string> preset_names();

/// Instantiates T and C for a grouping style over `topology`. Accepts the
/// canonical "<tracking>/<checking>" names, the protocol aliases (orbe,
/// gentlerain, causalspartan, okapi), "two-by-two" and "four-by-one".
/// Throws GroupingError for unknown names.
GroupConfig preset(std::string_view name, const Topology& topology);

/// Instruction for member servers to start maintaining a stable vector.
struct InitDirective {
  CheckingGroupId group;
  std::set<ServerId> members;
  std::uint64_t epoch = 0;
};

struct AddCheckingGroupResult {
  GroupConfig config;
  InitDirective directive;
};

AddCheckingGroupResult add_checking_group(const GroupConfig& config,
                                          const CheckingGroupId& id,
                                          const std::set<ServerId>& members);

/// Throws GroupingError if the group is unknown or if removing it would leave
/// any member without a checking group.
GroupConfig remove_checking_group(const GroupConfig& config, const CheckingGroupId& id);

/// Smallest checking group id of `server`; what clients use when a workload
/// does not pick one explicitly.
CheckingGroupId default_checking_group(const GroupConfig& config, const ServerId& server);

}  // namespace accf
