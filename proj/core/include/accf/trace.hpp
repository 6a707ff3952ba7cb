#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "accf/dependency_set.hpp"
#include "accf/network.hpp"

namespace accf {

/// Record kinds. Requests are logged by the server that receives them,
/// replies and acks by the client that receives them.
enum class TraceKind {
  kPutReq,     // server created a version (peer = client)
  kPutAck,     // client received PutReply (ds = client DS after merge)
  kGetReq,     // server received GetReq (ds = request ds)
  kGetPark,    // server parked a GetReq
  kGetReply,   // client received GetReply (ds = version ds)
  kReplicate,  // server applied a Replicate (peer = sender)
  kHeartbeat,  // server applied a Heartbeat
  kGossip,     // server VV/SVV snapshot (ds = VV, detail = "svv=<entries>")
  kReconfig,   // server applied a new grouping epoch
};

std::string_view to_string(TraceKind kind);
TraceKind parse_trace_kind(std::string_view text);

struct TraceRecord {
  sim::SimTime time = 0;
  std::string actor;
  TraceKind kind = TraceKind::kPutReq;
  std::string key;
  std::optional<HlcTimestamp> wt;
  TimestampEntries ds;
  std::string cg;
  std::string origin;
  std::string peer;
  std::string status;
  std::string detail;

  bool operator==(const TraceRecord&) const = default;
};

using Trace = std::vector<TraceRecord>;

class MalformedTrace : public std::runtime_error {
 public:
  MalformedTrace(const std::string& message, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// One tab-separated line (no newline): time, actor, kind, key, wt, ds, cg,
/// origin, peer, status, detail. Empty fields render as "-".
std::string format_record(const TraceRecord& record);

/// Throws MalformedTrace (line 0) on bad input.
TraceRecord parse_record(std::string_view line);

inline constexpr std::string_view kTraceHeader = "# accf-trace v1";

/// Header line, records, then "# end <count>".
void write_trace(std::ostream& os, const Trace& trace);
std::string render_trace(const Trace& trace);

/// Throws MalformedTrace with the offending 1-based line; a missing or
/// mismatched end marker is reported as truncation.
Trace read_trace(std::istream& is);
Trace parse_trace(std::string_view text);

/// Line number of record `index` in the rendered file.
inline std::size_t trace_line_of(std::size_t index) { return index + 2; }

/// Helpers for the "name=value name=value" detail field.
std::optional<std::string> detail_field(std::string_view detail, std::string_view name);

}  // namespace accf
