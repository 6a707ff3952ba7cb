#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "accf/dependency_set.hpp"
#include "accf/grouping.hpp"
#include "accf/version.hpp"

namespace accf {

enum class ReplyStatus {
  kOk,
  kKeyNotFound,
  kUnknownCheckingGroup,
  kNotHosted,
  kTimeout,
};

std::string_view to_string(ReplyStatus status);
ReplyStatus parse_reply_status(std::string_view text);

struct GetReq {
  Key key;
  CheckingGroupId cg;
  DependencySet ds;
};

struct GetReply {
  Key key;
  CheckingGroupId cg;
  ReplyStatus status = ReplyStatus::kOk;
  std::optional<Version> version;
};

struct PutReq {
  Key key;
  Value value;
  DependencySet ds;
};

struct PutReply {
  Key key;
  ReplyStatus status = ReplyStatus::kOk;
  TrackingGroupId tg;
  HlcTimestamp ut;
};

struct Replicate {
  Key key;
  Version version;
};

struct Heartbeat {
  HlcTimestamp timestamp;
};

struct VvGossip {
  ServerId sender;
  VersionVector vv;
};

/// Control-plane message carrying a new epoch of the grouping.
struct Reconfigure {
  std::shared_ptr<const GroupConfig> config;
  std::string description;
};

using Payload =
    std::variant<GetReq, GetReply, PutReq, PutReply, Replicate, Heartbeat, VvGossip, Reconfigure>;

/// A message in flight. `link_seq` numbers server-to-server traffic per
/// directed link (starting at 1); 0 means unsequenced.
struct Envelope {
  std::string from;
  std::string to;
  std::uint64_t link_seq = 0;
  Payload payload;
};

}  // namespace accf
