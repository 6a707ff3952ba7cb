#include "accf/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace accf {

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

std::string_view to_string(ReadFallback fallback) {
  switch (fallback) {
    case ReadFallback::kStableJoin: return "stable-join";
    case ReadFallback::kLatest: return "latest";
  }
  return "?";
}

ReadFallback parse_read_fallback(std::string_view text) {
  if (text == "stable-join") return ReadFallback::kStableJoin;
  if (text == "latest") return ReadFallback::kLatest;
  throw std::invalid_argument("unknown read fallback '" + std::string(text) + "'");
}

namespace {

int line_of(const YAML::Node& node) { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }

void require_map(const YAML::Node& node, std::string_view what) {
  if (!node.IsMap()) throw ConfigError(std::string(what) + " must be a mapping", line_of(node));
}

void reject_unknown(const YAML::Node& node, std::string_view what,
                    std::initializer_list<std::string_view> allowed) {
  require_map(node, what);
  for (const auto& item : node) {
    auto key = item.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown field '" + key + "' in " + std::string(what),
                        line_of(item.first));
    }
  }
}

template <class T>
T scalar(const YAML::Node& node, std::string_view what) {
  if (!node.IsScalar()) throw ConfigError(std::string(what) + " must be a scalar", line_of(node));
  try {
    return node.as<T>();
  } catch (const YAML::BadConversion&) {
    throw ConfigError("bad value '" + node.Scalar() + "' for " + std::string(what), line_of(node));
  }
}

template <class T>
T field_or(const YAML::Node& parent, const char* name, T fallback) {
  auto node = parent[name];
  return node ? scalar<T>(node, name) : fallback;
}

const YAML::Node required(const YAML::Node& parent, const char* name, std::string_view where) {
  auto node = parent[name];
  if (!node) {
    throw ConfigError("missing field '" + std::string(name) + "' in " + std::string(where),
                      line_of(parent));
  }
  return node;
}

std::set<ServerId> server_list(const YAML::Node& node, std::string_view what) {
  if (!node.IsSequence()) throw ConfigError(std::string(what) + " must be a list", line_of(node));
  std::set<ServerId> out;
  for (const auto& item : node) out.insert(ServerId{scalar<std::string>(item, what)});
  return out;
}

std::int64_t non_negative(std::int64_t value, const YAML::Node& node, std::string_view what) {
  if (value < 0) throw ConfigError(std::string(what) + " must be >= 0", line_of(node));
  return value;
}

template <class Id>
std::map<Id, std::set<ServerId>> group_map(const YAML::Node& node, std::string_view what) {
  require_map(node, what);
  std::map<Id, std::set<ServerId>> out;
  for (const auto& item : node) {
    auto name = scalar<std::string>(item.first, what);
    if (!out.emplace(Id{name}, server_list(item.second, name)).second) {
      throw ConfigError("duplicate group '" + name + "'", line_of(item.first));
    }
  }
  return out;
}

sim::DelayModel parse_network(const YAML::Node& node) {
  reject_unknown(node, "network",
                 {"default_latency_ms", "client_latency_ms", "latency", "extra_ms", "jitter_ms",
                  "fifo", "duplicate_probability"});
  sim::DelayModel out;
  auto read_ms = [&](const char* name, std::int64_t fallback) {
    auto value = field_or<std::int64_t>(node, name, fallback);
    return node[name] ? non_negative(value, node[name], name) : value;
  };
  out.default_latency_ms = read_ms("default_latency_ms", out.default_latency_ms);
  out.client_latency_ms = read_ms("client_latency_ms", out.client_latency_ms);
  out.jitter_ms = read_ms("jitter_ms", out.jitter_ms);
  out.fifo = field_or<bool>(node, "fifo", out.fifo);
  out.duplicate_probability = field_or<double>(node, "duplicate_probability", 0.0);
  if (out.duplicate_probability < 0.0 || out.duplicate_probability > 1.0) {
    throw ConfigError("duplicate_probability must be in [0, 1]", line_of(node["duplicate_probability"]));
  }
  if (auto latency = node["latency"]) {
    if (!latency.IsSequence()) throw ConfigError("latency must be a list", line_of(latency));
    for (const auto& item : latency) {
      reject_unknown(item, "latency entry", {"from", "to", "ms"});
      auto from = scalar<std::string>(required(item, "from", "latency entry"), "from");
      auto to = scalar<std::string>(required(item, "to", "latency entry"), "to");
      auto ms = non_negative(scalar<std::int64_t>(required(item, "ms", "latency entry"), "ms"),
                             item, "ms");
      out.latency[{from, to}] = ms;
    }
  }
  if (auto extra = node["extra_ms"]) {
    require_map(extra, "extra_ms");
    for (const auto& item : extra) {
      out.extra_ms[scalar<std::string>(item.first, "extra_ms")] =
          non_negative(scalar<std::int64_t>(item.second, "extra_ms"), item.second, "extra_ms");
    }
  }
  return out;
}

ProtocolParams parse_protocol(const YAML::Node& node) {
  reject_unknown(node, "protocol", {"heartbeat_ms", "gossip_ms", "get_timeout_ms", "fallback"});
  ProtocolParams out;
  out.heartbeat_ms = field_or<std::int64_t>(node, "heartbeat_ms", out.heartbeat_ms);
  out.gossip_ms = field_or<std::int64_t>(node, "gossip_ms", out.gossip_ms);
  out.get_timeout_ms = field_or<std::int64_t>(node, "get_timeout_ms", out.get_timeout_ms);
  if (out.heartbeat_ms <= 0) throw ConfigError("heartbeat_ms must be > 0", line_of(node["heartbeat_ms"]));
  if (out.gossip_ms <= 0) throw ConfigError("gossip_ms must be > 0", line_of(node["gossip_ms"]));
  if (out.get_timeout_ms < 0) throw ConfigError("get_timeout_ms must be >= 0", line_of(node["get_timeout_ms"]));
  if (auto fallback = node["fallback"]) {
    try {
      out.fallback = parse_read_fallback(scalar<std::string>(fallback, "fallback"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what(), line_of(fallback));
    }
  }
  return out;
}

SystemConfig from_yaml(const YAML::Node& root) {
  reject_unknown(root, "config",
                 {"version", "epoch", "servers", "tracking", "checking", "placement", "network",
                  "protocol"});
  SystemConfig config;
  auto version_node = required(root, "version", "config");
  config.version = scalar<int>(version_node, "version");
  if (config.version != SystemConfig::kSchemaVersion) {
    throw ConfigError("unsupported config version " + std::to_string(config.version),
                      line_of(version_node));
  }
  auto& groups = config.groups;
  groups.epoch = field_or<std::uint64_t>(root, "epoch", 0);

  auto servers = required(root, "servers", "config");
  if (!servers.IsSequence()) throw ConfigError("servers must be a list", line_of(servers));
  for (const auto& item : servers) {
    reject_unknown(item, "server", {"id", "region", "replica", "clock_offset_ms", "clock_drift"});
    ServerInfo info;
    info.id = ServerId{scalar<std::string>(required(item, "id", "server"), "id")};
    info.region = field_or<std::string>(item, "region", "");
    info.replica = field_or<std::string>(item, "replica", "");
    info.clock_offset_ms = field_or<std::int64_t>(item, "clock_offset_ms", 0);
    info.clock_drift = field_or<double>(item, "clock_drift", 0.0);
    if (!groups.servers.emplace(info.id, info).second) {
      throw ConfigError("duplicate server '" + info.id.str() + "'", line_of(item));
    }
  }
  groups.tracking = group_map<TrackingGroupId>(required(root, "tracking", "config"), "tracking");
  groups.checking = group_map<CheckingGroupId>(required(root, "checking", "config"), "checking");
  auto placement = required(root, "placement", "config");
  require_map(placement, "placement");
  for (const auto& item : placement) {
    groups.placement[scalar<std::string>(item.first, "placement")] =
        server_list(item.second, "placement");
  }
  if (auto network = root["network"]) config.network = parse_network(network);
  if (auto protocol = root["protocol"]) config.protocol = parse_protocol(protocol);
  return config;
}

void emit_members(YAML::Emitter& out, const std::set<ServerId>& members) {
  out << YAML::Flow << YAML::BeginSeq;
  for (const auto& member : members) out << member.str();
  out << YAML::EndSeq;
}

}  // namespace

SystemConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("empty config", 1);
  try {
    return from_yaml(root);
  } catch (const YAML::Exception& e) {
    throw ConfigError(e.msg, e.mark.is_null() ? 0 : e.mark.line + 1);
  }
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string(), 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const SystemConfig& config) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "version" << YAML::Value << config.version;
  out << YAML::Key << "epoch" << YAML::Value << config.groups.epoch;

  out << YAML::Key << "servers" << YAML::Value << YAML::BeginSeq;
  for (const auto& [id, info] : config.groups.servers) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << id.str();
    out << YAML::Key << "region" << YAML::Value << YAML::DoubleQuoted << info.region;
    out << YAML::Key << "replica" << YAML::Value << YAML::DoubleQuoted << info.replica;
    out << YAML::Key << "clock_offset_ms" << YAML::Value << info.clock_offset_ms;
    out << YAML::Key << "clock_drift" << YAML::Value << info.clock_drift;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "tracking" << YAML::Value << YAML::BeginMap;
  for (const auto& [group, members] : config.groups.tracking) {
    out << YAML::Key << group.str() << YAML::Value;
    emit_members(out, members);
  }
  out << YAML::EndMap;
  out << YAML::Key << "checking" << YAML::Value << YAML::BeginMap;
  for (const auto& [group, members] : config.groups.checking) {
    out << YAML::Key << group.str() << YAML::Value;
    emit_members(out, members);
  }
  out << YAML::EndMap;
  out << YAML::Key << "placement" << YAML::Value << YAML::BeginMap;
  for (const auto& [name, hosts] : config.groups.placement) {
    out << YAML::Key << name << YAML::Value;
    emit_members(out, hosts);
  }
  out << YAML::EndMap;

  const auto& net = config.network;
  out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "default_latency_ms" << YAML::Value << net.default_latency_ms;
  out << YAML::Key << "client_latency_ms" << YAML::Value << net.client_latency_ms;
  out << YAML::Key << "latency" << YAML::Value << YAML::BeginSeq;
  for (const auto& [link, ms] : net.latency) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "from" << YAML::Value << link.first
        << YAML::Key << "to" << YAML::Value << link.second << YAML::Key << "ms" << YAML::Value
        << ms << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "extra_ms" << YAML::Value << YAML::BeginMap;
  for (const auto& [actor, ms] : net.extra_ms) out << YAML::Key << actor << YAML::Value << ms;
  out << YAML::EndMap;
  out << YAML::Key << "jitter_ms" << YAML::Value << net.jitter_ms;
  out << YAML::Key << "fifo" << YAML::Value << net.fifo;
  out << YAML::Key << "duplicate_probability" << YAML::Value << net.duplicate_probability;
  out << YAML::EndMap;

  const auto& proto = config.protocol;
  out << YAML::Key << "protocol" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "heartbeat_ms" << YAML::Value << proto.heartbeat_ms;
  out << YAML::Key << "gossip_ms" << YAML::Value << proto.gossip_ms;
  out << YAML::Key << "get_timeout_ms" << YAML::Value << proto.get_timeout_ms;
  out << YAML::Key << "fallback" << YAML::Value << std::string(to_string(proto.fallback));
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

SystemConfig make_system_config(const Topology& topology, std::string_view preset_name) {
  SystemConfig config;
  config.groups = preset(preset_name, topology);
  return config;
}

}  // namespace accf
