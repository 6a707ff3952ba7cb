#include "accf/grouping.hpp"

#include <algorithm>
#include <array>

namespace accf {

bool is_valid_identifier(const std::string& name) {
  if (name.empty() || name == "-") return false;
  return std::none_of(name.begin(), name.end(), [](char ch) {
    return ch <= ' ' || ch == ',' || ch == '=' || ch == '\x7f';
  });
}

std::string key_class_of(const Key& key) { return key.substr(0, key.find('/')); }

TrackingGroupId GroupConfig::tracking_group(const ServerId& server) const {
  const TrackingGroupId* found = nullptr;
  for (const auto& [group, members] : tracking) {
    if (!members.contains(server)) continue;
    if (found) throw GroupingError("server " + server.str() + " is in several tracking groups");
    found = &group;
  }
  if (!found) throw GroupingError("server " + server.str() + " has no tracking group");
  return *found;
}

std::set<CheckingGroupId> GroupConfig::checking_groups(const ServerId& server) const {
  std::set<CheckingGroupId> out;
  for (const auto& [group, members] : checking) {
    if (members.contains(server)) out.insert(group);
  }
  return out;
}

const std::set<ServerId>& GroupConfig::hosts(const Key& key) const {
  auto it = placement.find(key_class_of(key));
  if (it == placement.end()) throw GroupingError("key '" + key + "' belongs to no key class");
  return it->second;
}

bool GroupConfig::hosts_key(const ServerId& server, const Key& key) const {
  auto it = placement.find(key_class_of(key));
  return it != placement.end() && it->second.contains(server);
}

std::set<ServerId> GroupConfig::key_sharing_peers(const ServerId& server) const {
  std::set<ServerId> out;
  for (const auto& [name, hosts] : placement) {
    if (!hosts.contains(server)) continue;
    out.insert(hosts.begin(), hosts.end());
  }
  out.erase(server);
  return out;
}

std::set<ServerId> GroupConfig::checking_peers(const ServerId& server) const {
  std::set<ServerId> out;
  for (const auto& [group, members] : checking) {
    if (members.contains(server)) out.insert(members.begin(), members.end());
  }
  out.erase(server);
  return out;
}

bool shares_key(const GroupConfig& config, const ServerId& i, const ServerId& j) {
  return std::any_of(config.placement.begin(), config.placement.end(), [&](const auto& entry) {
    return entry.second.contains(i) && entry.second.contains(j);
  });
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNoServers: return "no servers";
    case ViolationKind::kInvalidIdentifier: return "invalid identifier";
    case ViolationKind::kMissingTrackingGroup: return "missing tracking group";
    case ViolationKind::kMultipleTrackingGroups: return "multiple tracking groups";
    case ViolationKind::kEmptyTrackingGroup: return "empty tracking group";
    case ViolationKind::kEmptyCheckingSet: return "empty checking set";
    case ViolationKind::kEmptyCheckingGroup: return "empty checking group";
    case ViolationKind::kUnknownServer: return "unknown server";
    case ViolationKind::kEmptyHostSet: return "empty host set";
  }
  return "?";
}

std::vector<Violation> validate(const GroupConfig& config) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind kind, std::string message) {
    out.push_back({kind, std::string(to_string(kind)) + ": " + std::move(message)});
  };
  auto check_members = [&](const std::string& what, const std::set<ServerId>& members) {
    for (const auto& member : members) {
      if (!config.has_server(member)) add(ViolationKind::kUnknownServer, what + " references " + member.str());
    }
  };

  if (config.servers.empty()) add(ViolationKind::kNoServers, "configuration lists no servers");

  for (const auto& [id, info] : config.servers) {
    if (!is_valid_identifier(id.str())) add(ViolationKind::kInvalidIdentifier, "server '" + id.str() + "'");
    if (id != info.id) add(ViolationKind::kInvalidIdentifier, "server entry " + id.str() + " names " + info.id.str());
  }

  for (const auto& [group, members] : config.tracking) {
    if (!is_valid_identifier(group.str())) add(ViolationKind::kInvalidIdentifier, "tracking group '" + group.str() + "'");
    if (members.empty()) add(ViolationKind::kEmptyTrackingGroup, "tracking group " + group.str());
    check_members("tracking group " + group.str(), members);
  }
  for (const auto& [group, members] : config.checking) {
    if (!is_valid_identifier(group.str())) add(ViolationKind::kInvalidIdentifier, "checking group '" + group.str() + "'");
    if (members.empty()) add(ViolationKind::kEmptyCheckingGroup, "checking group " + group.str());
    check_members("checking group " + group.str(), members);
  }
  for (const auto& [name, hosts] : config.placement) {
    if (!is_valid_identifier(name) || name.find('/') != std::string::npos) {
      add(ViolationKind::kInvalidIdentifier, "key class '" + name + "'");
    }
    if (hosts.empty()) add(ViolationKind::kEmptyHostSet, "key class " + name);
    check_members("key class " + name, hosts);
  }

  for (const auto& [id, info] : config.servers) {
    auto groups = std::count_if(config.tracking.begin(), config.tracking.end(),
                                [&](const auto& entry) { return entry.second.contains(id); });
    if (groups == 0) add(ViolationKind::kMissingTrackingGroup, "server " + id.str());
    if (groups > 1) add(ViolationKind::kMultipleTrackingGroups, "server " + id.str());
    if (config.checking_groups(id).empty()) add(ViolationKind::kEmptyCheckingSet, "server " + id.str());
  }
  return out;
}

Topology four_server_topology() {
  Topology topo;
  for (auto [name, replica, region] :
       std::array<std::array<const char*, 3>, 4>{{{"A1", "1", "us-west"},
                                                   {"B1", "1", "us-west"},
                                                   {"A2", "2", "ap-southeast"},
                                                   {"B2", "2", "ap-southeast"}}}) {
    ServerId id{name};
    topo.servers[id] = ServerInfo{id, region, replica, 0, 0.0};
  }
  topo.placement["A"] = {ServerId{"A1"}, ServerId{"A2"}};
  topo.placement["B"] = {ServerId{"B1"}, ServerId{"B2"}};
  return topo;
}

namespace {

enum class Granularity { kServer, kReplica, kSystem };

struct PresetSpec {
  std::string_view name;
  std::string_view alias;
  Granularity tracking;
  Granularity checking;
};

constexpr std::array<PresetSpec, 6> kPresets{{
    {"per-server-tracking/per-replica-checking", "orbe", Granularity::kServer, Granularity::kReplica},
    {"per-system-tracking/per-replica-checking", "gentlerain", Granularity::kSystem, Granularity::kReplica},
    {"per-replica-tracking/per-replica-checking", "causalspartan", Granularity::kReplica, Granularity::kReplica},
    {"per-replica-tracking/per-system-checking", "okapi", Granularity::kReplica, Granularity::kSystem},
    {"two-by-two", "2x2", Granularity::kReplica, Granularity::kReplica},
    {"four-by-one", "4x1", Granularity::kServer, Granularity::kServer},
}};

std::string group_label(Granularity granularity, const ServerInfo& info, std::string_view system) {
  switch (granularity) {
    case Granularity::kServer: return info.id.str();
    case Granularity::kReplica:
      if (info.replica.empty()) {
        throw GroupingError("per-replica grouping needs a replica label on server " + info.id.str());
      }
      return info.replica;
    case Granularity::kSystem: return std::string(system);
  }
  return {};
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& spec : kPresets) out.emplace_back(spec.name);
  for (const auto& spec : kPresets) out.emplace_back(spec.alias);
  return out;
}

GroupConfig preset(std::string_view name, const Topology& topology) {
  auto it = std::find_if(kPresets.begin(), kPresets.end(), [&](const PresetSpec& spec) {
    return spec.name == name || spec.alias == name;
  });
  if (it == kPresets.end()) throw GroupingError("unknown grouping preset '" + std::string(name) + "'");

  GroupConfig config;
  config.servers = topology.servers;
  config.placement = topology.placement;
  for (const auto& [id, info] : topology.servers) {
    std::string tracking = group_label(it->tracking, info, "sys");
    if (it->tracking == Granularity::kReplica) tracking = "r" + tracking;
    config.tracking[TrackingGroupId{tracking}].insert(id);

    std::string checking = group_label(it->checking, info, "all");
    checking = (it->checking == Granularity::kServer ? "cg-" : "cg") + checking;
    config.checking[CheckingGroupId{checking}].insert(id);
  }
  return config;
}

AddCheckingGroupResult add_checking_group(const GroupConfig& config, const CheckingGroupId& id,
                                          const std::set<ServerId>& members) {
  if (config.checking.contains(id)) throw GroupingError("checking group " + id.str() + " already exists");
  if (!is_valid_identifier(id.str())) throw GroupingError("invalid checking group id '" + id.str() + "'");
  if (members.empty()) throw GroupingError("checking group " + id.str() + " has no members");
  for (const auto& member : members) {
    if (!config.has_server(member)) {
      throw GroupingError("checking group " + id.str() + " names unknown server " + member.str());
    }
  }
  AddCheckingGroupResult result{config, {id, members, config.epoch + 1}};
  result.config.checking[id] = members;
  result.config.epoch += 1;
  return result;
}

GroupConfig remove_checking_group(const GroupConfig& config, const CheckingGroupId& id) {
  auto it = config.checking.find(id);
  if (it == config.checking.end()) throw GroupingError("unknown checking group " + id.str());
  for (const auto& member : it->second) {
    if (config.checking_groups(member).size() <= 1) {
      throw GroupingError("removing " + id.str() + " would leave " + member.str() +
                          " without a checking group");
    }
  }
  GroupConfig out = config;
  out.checking.erase(id);
  out.epoch += 1;
  return out;
}

CheckingGroupId default_checking_group(const GroupConfig& config, const ServerId& server) {
  auto groups = config.checking_groups(server);
  if (groups.empty()) throw GroupingError("server " + server.str() + " has no checking group");
  return *groups.begin();
}

}  // namespace accf
