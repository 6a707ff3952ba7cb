#include "accf/trace.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace accf {

namespace {

constexpr std::array<std::string_view, 9> kKindNames{
    "PUT_REQ", "PUT_ACK", "GET_REQ", "GET_PARK", "GET_REPLY",
    "REPLICATE", "HEARTBEAT", "GOSSIP", "RECONFIG"};

constexpr std::size_t kFieldCount = 11;

void append_field(std::string& out, std::string_view value) {
  if (value.find_first_of("\t\n\r") != std::string_view::npos) {
    throw std::invalid_argument("trace field contains a tab or newline: '" + std::string(value) + "'");
  }
  out += '\t';
  out += value.empty() ? std::string_view("-") : value;
}

std::string field_value(std::string_view text) {
  return text == "-" ? std::string() : std::string(text);
}

}  // namespace

MalformedTrace::MalformedTrace(const std::string& message, std::size_t line)
    : std::runtime_error(line > 0 ? "trace line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

std::string_view to_string(TraceKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

TraceKind parse_trace_kind(std::string_view text) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == text) return static_cast<TraceKind>(i);
  }
  throw MalformedTrace("unknown record kind '" + std::string(text) + "'", 0);
}

std::string format_record(const TraceRecord& record) {
  std::string out = std::to_string(record.time);
  append_field(out, record.actor);
  append_field(out, to_string(record.kind));
  append_field(out, record.key);
  append_field(out, record.wt ? to_string(*record.wt) : std::string());
  append_field(out, format_entries(record.ds));
  append_field(out, record.cg);
  append_field(out, record.origin);
  append_field(out, record.peer);
  append_field(out, record.status);
  append_field(out, record.detail);
  return out;
}

TraceRecord parse_record(std::string_view line) {
  std::array<std::string_view, kFieldCount> fields;
  std::size_t count = 0;
  while (true) {
    auto tab = line.find('\t');
    if (count == kFieldCount) throw MalformedTrace("too many fields", 0);
    fields[count++] = line.substr(0, tab);
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  if (count != kFieldCount) {
    throw MalformedTrace("expected " + std::to_string(kFieldCount) + " fields, got " +
                             std::to_string(count), 0);
  }

  TraceRecord record;
  auto time_text = fields[0];
  auto [ptr, ec] = std::from_chars(time_text.data(), time_text.data() + time_text.size(), record.time);
  if (ec != std::errc{} || ptr != time_text.data() + time_text.size() || record.time < 0) {
    throw MalformedTrace("bad time '" + std::string(time_text) + "'", 0);
  }
  try {
    record.actor = field_value(fields[1]);
    record.kind = parse_trace_kind(fields[2]);
    record.key = field_value(fields[3]);
    if (fields[4] != "-") record.wt = parse_timestamp(fields[4]);
    if (fields[5] != "-") record.ds = parse_entries(fields[5]);
  } catch (const std::invalid_argument& e) {
    throw MalformedTrace(e.what(), 0);
  }
  record.cg = field_value(fields[6]);
  record.origin = field_value(fields[7]);
  record.peer = field_value(fields[8]);
  record.status = field_value(fields[9]);
  record.detail = field_value(fields[10]);
  if (record.actor.empty()) throw MalformedTrace("record without actor", 0);
  return record;
}

void write_trace(std::ostream& os, const Trace& trace) {
  os << kTraceHeader << '\n';
  for (const auto& record : trace) os << format_record(record) << '\n';
  os << "# end " << trace.size() << '\n';
}

std::string render_trace(const Trace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

Trace read_trace(std::istream& is) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool ended = false;
  sim::SimTime last_time = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (ended) throw MalformedTrace("content after end marker", line_no);
    if (line_no == 1) {
      if (line != kTraceHeader) throw MalformedTrace("missing trace header", line_no);
      continue;
    }
    if (line.starts_with("# end ")) {
      std::size_t expected = 0;
      auto digits = std::string_view(line).substr(6);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), expected);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || expected != trace.size()) {
        throw MalformedTrace("end marker does not match record count (truncated trace?)", line_no);
      }
      if (is.eof()) throw MalformedTrace("end marker without newline (truncated trace?)", line_no);
      ended = true;
      continue;
    }
    if (line.starts_with("#")) continue;
    try {
      trace.push_back(parse_record(line));
    } catch (const MalformedTrace& e) {
      throw MalformedTrace(e.what(), line_no);
    }
    if (trace.back().time < last_time) throw MalformedTrace("time goes backwards", line_no);
    last_time = trace.back().time;
  }
  if (line_no == 0) throw MalformedTrace("empty trace file", 1);
  if (!ended) throw MalformedTrace("missing end marker (truncated trace)", line_no);
  return trace;
}

Trace parse_trace(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_trace(is);
}

std::optional<std::string> detail_field(std::string_view detail, std::string_view name) {
  while (!detail.empty()) {
    auto space = detail.find(' ');
    auto token = detail.substr(0, space);
    if (token.size() > name.size() && token.starts_with(name) && token[name.size()] == '=') {
      return std::string(token.substr(name.size() + 1));
    }
    if (space == std::string_view::npos) break;
    detail.remove_prefix(space + 1);
  }
  return std::nullopt;
}

}  // namespace accf
