#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "accf/message.hpp"
#include "accf/trace.hpp"

namespace accf::checker {

/// Exact happened-before over client operations: one coordinate per writing
/// session, counting that session's writes in the causal past.
using GroundTruthClock = std::map<std::string, std::uint64_t>;

struct VersionRef {
  Key key;
  std::string origin;
  HlcTimestamp wt;

  auto operator<=>(const VersionRef&) const = default;
};

struct WriteEvent {
  std::size_t record = 0;
  std::string session;
  VersionRef version;
  GroundTruthClock clock;
  /// Largest write time among writes that happened before this one.
  std::optional<HlcTimestamp> past_max_wt;
};

struct ReadEvent {
  std::size_t record = 0;
  std::string session;
  Key key;
  ReplyStatus status = ReplyStatus::kOk;
  std::optional<VersionRef> version;
  /// Session's causal cut just before the read.
  GroundTruthClock cut;
  /// True when the reply names a version no PUT_REQ created.
  bool phantom = false;
};

struct History {
  std::vector<WriteEvent> writes;
  std::vector<ReadEvent> reads;
  std::map<VersionRef, std::size_t> write_of;
  std::map<Key, std::vector<std::size_t>> writes_by_key;
};

/// Rebuilds causality from a trace. Throws MalformedTrace on structural
/// problems (acks without a write, duplicate writes).
History replay(const Trace& trace);

enum class FindingKind {
  kCausalViolation,
  kMonotonicReadRegression,
  kReadYourWritesMiss,
  kHlcOrderViolation,
  kPhantomRead,
};

std::string_view to_string(FindingKind kind);

struct Finding {
  FindingKind kind;
  std::size_t record = 0;
  std::string session;
  Key key;
  std::string message;
};

struct Report {
  std::vector<Finding> findings;
  std::size_t reads_checked = 0;
  std::size_t writes_checked = 0;

  bool ok() const noexcept { return findings.empty(); }
  std::size_t count(FindingKind kind) const;
};

Report check(const History& history);
Report check_trace(const Trace& trace);

/// Human-readable report; findings reference trace file line numbers.
std::string format_report(const Report& report);

/// True when a happened-before b (a != b, a's coordinate covered by b).
bool happened_before(const WriteEvent& a, const WriteEvent& b);

}  // namespace accf::checker
