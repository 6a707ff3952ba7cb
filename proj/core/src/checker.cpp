#include "accf/checker.hpp"

#include <algorithm>
#include <sstream>

namespace accf::checker {

namespace {

struct SessionState {
  GroundTruthClock cut;
  std::uint64_t issued = 0;
  std::optional<HlcTimestamp> max_wt;
};

void merge_into(GroundTruthClock& into, const GroundTruthClock& from) {
  for (const auto& [session, count] : from) {
    auto& slot = into[session];
    slot = std::max(slot, count);
  }
}

void raise_max(std::optional<HlcTimestamp>& slot, std::optional<HlcTimestamp> value) {
  if (value && (!slot || *slot < *value)) slot = value;
}

std::uint64_t coordinate(const GroundTruthClock& clock, const std::string& session) {
  auto it = clock.find(session);
  return it == clock.end() ? 0 : it->second;
}

void absorb(SessionState& state, const WriteEvent& write) {
  merge_into(state.cut, write.clock);
  raise_max(state.max_wt, write.past_max_wt);
  raise_max(state.max_wt, write.version.wt);
}

std::string describe(const VersionRef& ref) {
  return ref.key + "@" + to_string(ref.wt) + "/" + ref.origin;
}

}  // namespace

std::string_view to_string(FindingKind kind) {
  switch (kind) {
    case FindingKind::kCausalViolation: return "causal-violation";
    case FindingKind::kMonotonicReadRegression: return "monotonic-read-regression";
    case FindingKind::kReadYourWritesMiss: return "read-your-writes-miss";
    case FindingKind::kHlcOrderViolation: return "hlc-order-violation";
    case FindingKind::kPhantomRead: return "phantom-read";
  }
  return "?";
}

bool happened_before(const WriteEvent& a, const WriteEvent& b) {
  if (a.version == b.version) return false;
  return coordinate(b.clock, a.session) >= coordinate(a.clock, a.session);
}

History replay(const Trace& trace) {
  History history;
  std::map<std::string, SessionState> sessions;

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& record = trace[i];
    const auto line = trace_line_of(i);
    const bool ok = record.status == "OK";

    if (record.kind == TraceKind::kPutReq && ok) {
      if (!record.wt || record.peer.empty()) throw MalformedTrace("PUT_REQ without write time or client", line);
      VersionRef ref{record.key, record.actor, *record.wt};
      if (history.write_of.contains(ref)) throw MalformedTrace("duplicate write " + describe(ref), line);
      auto& state = sessions[record.peer];
      WriteEvent write{i, record.peer, ref, state.cut, state.max_wt};
      write.clock[record.peer] = ++state.issued;
      history.write_of.emplace(ref, history.writes.size());
      history.writes_by_key[ref.key].push_back(history.writes.size());
      history.writes.push_back(std::move(write));
    } else if (record.kind == TraceKind::kPutAck && ok) {
      if (!record.wt) throw MalformedTrace("PUT_ACK without write time", line);
      VersionRef ref{record.key, record.origin, *record.wt};
      auto it = history.write_of.find(ref);
      if (it == history.write_of.end()) throw MalformedTrace("PUT_ACK for unknown write " + describe(ref), line);
      const auto& write = history.writes[it->second];
      if (write.session != record.actor) throw MalformedTrace("PUT_ACK delivered to the wrong client", line);
      absorb(sessions[record.actor], write);
    } else if (record.kind == TraceKind::kGetReply) {
      auto& state = sessions[record.actor];
      ReadEvent read;
      read.record = i;
      read.session = record.actor;
      read.key = record.key;
      try {
        read.status = parse_reply_status(record.status);
      } catch (const std::invalid_argument& e) {
        throw MalformedTrace(e.what(), line);
      }
      read.cut = state.cut;
      if (read.status == ReplyStatus::kOk) {
        if (!record.wt) throw MalformedTrace("GET_REPLY OK without write time", line);
        VersionRef ref{record.key, record.origin, *record.wt};
        read.version = ref;
        auto it = history.write_of.find(ref);
        if (it == history.write_of.end()) {
          read.phantom = true;
        } else {
          absorb(state, history.writes[it->second]);
        }
      }
      history.reads.push_back(std::move(read));
    }
  }
  return history;
}

std::size_t Report::count(FindingKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(findings.begin(), findings.end(), [&](const Finding& f) { return f.kind == kind; }));
}

Report check(const History& history) {
  Report report;

  // Per (session, key), indices of that session's writes in issue order.
  std::map<std::pair<std::string, Key>, std::vector<std::size_t>> by_session_key;
  for (std::size_t w = 0; w < history.writes.size(); ++w) {
    const auto& write = history.writes[w];
    by_session_key[{write.session, write.version.key}].push_back(w);
  }
  // Latest write by `session` to `key` inside `cut`.
  auto latest_in_cut = [&](const std::string& session, const Key& key,
                           const GroundTruthClock& cut) -> const WriteEvent* {
    auto it = by_session_key.find({session, key});
    if (it == by_session_key.end()) return nullptr;
    const auto limit = coordinate(cut, session);
    const auto& list = it->second;
    auto pos = std::upper_bound(list.begin(), list.end(), limit, [&](std::uint64_t bound, std::size_t w) {
      return bound < coordinate(history.writes[w].clock, session);
    });
    if (pos == list.begin()) return nullptr;
    return &history.writes[*std::prev(pos)];
  };

  for (const auto& write : history.writes) {
    ++report.writes_checked;
    if (write.past_max_wt && write.version.wt <= *write.past_max_wt) {
      report.findings.push_back({FindingKind::kHlcOrderViolation, write.record, write.session, write.version.key,
                                 "write " + describe(write.version) + " is not above " +
                                     to_string(*write.past_max_wt) + " from its causal past"});
    }
  }

  std::map<std::pair<std::string, Key>, HlcTimestamp> last_read;
  for (const auto& read : history.reads) {
    if (read.status != ReplyStatus::kOk && read.status != ReplyStatus::kKeyNotFound) continue;
    ++report.reads_checked;
    auto add = [&](FindingKind kind, std::string message) {
      report.findings.push_back({kind, read.record, read.session, read.key, std::move(message)});
    };

    if (read.phantom) {
      add(FindingKind::kPhantomRead, "returned " + describe(*read.version) + ", which was never written");
      continue;
    }
    const WriteEvent* returned =
        read.version ? &history.writes[history.write_of.at(*read.version)] : nullptr;
    const std::string got = returned ? describe(returned->version) : std::string("KEY_NOT_FOUND");

    for (const auto& [session, count] : read.cut) {
      const WriteEvent* newer = latest_in_cut(session, read.key, read.cut);
      if (!newer) continue;
      if (!returned || happened_before(*returned, *newer)) {
        add(FindingKind::kCausalViolation,
            "returned " + got + " but " + describe(newer->version) + " is in the causal past");
        break;
      }
    }

    if (const WriteEvent* own = latest_in_cut(read.session, read.key, read.cut)) {
      if (!returned || returned->version.wt < own->version.wt) {
        add(FindingKind::kReadYourWritesMiss,
            "returned " + got + " after own write " + describe(own->version));
      }
    }

    auto key = std::make_pair(read.session, read.key);
    auto prev = last_read.find(key);
    if (prev != last_read.end() && (!returned || returned->version.wt < prev->second)) {
      add(FindingKind::kMonotonicReadRegression,
          "returned " + got + " after an earlier read at " + to_string(prev->second));
    }
    if (returned && (prev == last_read.end() || prev->second < returned->version.wt)) {
      last_read[key] = returned->version.wt;
    }
  }
  return report;
}

Report check_trace(const Trace& trace) { return check(replay(trace)); }

std::string format_report(const Report& report) {
  std::ostringstream os;
  for (const auto& finding : report.findings) {
    os << "line " << trace_line_of(finding.record) << ": " << to_string(finding.kind) << ": session "
       << finding.session << " key " << finding.key << ": " << finding.message << '\n';
  }
  os << "checked " << report.reads_checked << " reads and " << report.writes_checked << " writes: ";
  if (report.ok()) {
    os << "no violations\n";
  } else {
    os << report.findings.size() << " violation(s)\n";
  }
  return os.str();
}

}  // namespace accf::checker
