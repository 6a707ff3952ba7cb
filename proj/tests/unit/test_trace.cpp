#include <gtest/gtest.h>

#include <algorithm>

#include "accf/trace.hpp"

namespace accf {
namespace {

Trace sample() {
  TraceRecord put;
  put.time = 5;
  put.actor = "A1";
  put.kind = TraceKind::kPutReq;
  put.key = "A/x";
  put.wt = HlcTimestamp{5, 0};
  put.ds = {{TrackingGroupId{"r1"}, {5, 0}}};
  put.origin = "A1";
  put.peer = "C1";
  put.status = "OK";
  put.detail = "v=hello world";

  TraceRecord reply;
  reply.time = 9;
  reply.actor = "C1";
  reply.kind = TraceKind::kGetReply;
  reply.key = "A/x";
  reply.cg = "cg1";
  reply.status = "KEY_NOT_FOUND";
  return {put, reply};
}

TEST(Trace, RecordLineRoundTrip) {
  for (const auto& record : sample()) {
    const auto line = format_record(record);
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 10);
    EXPECT_EQ(parse_record(line), record);
  }
  EXPECT_EQ(format_record(sample()[1]), "9\tC1\tGET_REPLY\tA/x\t-\t-\tcg1\t-\t-\tKEY_NOT_FOUND\t-");
}

TEST(Trace, FileRoundTrip) {
  const auto trace = sample();
  const auto text = render_trace(trace);
  EXPECT_TRUE(text.starts_with("# accf-trace v1\n"));
  EXPECT_TRUE(text.ends_with("# end 2\n"));
  EXPECT_EQ(parse_trace(text), trace);
  EXPECT_EQ(parse_trace(render_trace({})), Trace{});
}

std::size_t malformed_line(const std::string& text) {
  try {
    parse_trace(text);
  } catch (const MalformedTrace& e) {
    return e.line();
  }
  return 0;
}

TEST(Trace, DetectsTruncation) {
  const auto text = render_trace(sample());
  const auto without_end = text.substr(0, text.rfind("# end"));
  EXPECT_THROW(parse_trace(without_end), MalformedTrace);
  EXPECT_THROW(parse_trace(text.substr(0, text.size() - 1)), MalformedTrace);
  EXPECT_THROW(parse_trace(text.substr(0, text.size() / 2)), MalformedTrace);
  std::string wrong_count = text;
  wrong_count.replace(wrong_count.rfind("2"), 1, "3");
  EXPECT_THROW(parse_trace(wrong_count), MalformedTrace);
}

TEST(Trace, ReportsOffendingLine) {
  EXPECT_EQ(malformed_line("garbage\n"), 1u);
  auto text = render_trace(sample());
  auto broken = text;
  broken.replace(broken.find("PUT_REQ"), 7, "PUT_REK");
  EXPECT_EQ(malformed_line(broken), 2u);
  auto backwards = text;
  backwards.replace(backwards.find("9\tC1"), 1, "1");
  EXPECT_EQ(malformed_line(backwards), 3u);
  EXPECT_EQ(malformed_line(text + "extra\n"), 5u);
}

TEST(Trace, RejectsSeparatorsInFields) {
  auto record = sample()[0];
  record.detail = "a\tb";
  EXPECT_THROW(format_record(record), std::invalid_argument);
  record.detail = "a\nb";
  EXPECT_THROW(format_record(record), std::invalid_argument);
}

TEST(Trace, KindNames) {
  for (auto kind : {TraceKind::kPutReq, TraceKind::kPutAck, TraceKind::kGetReq, TraceKind::kGetPark,
                    TraceKind::kGetReply, TraceKind::kReplicate, TraceKind::kHeartbeat, TraceKind::kGossip,
                    TraceKind::kReconfig}) {
    EXPECT_EQ(parse_trace_kind(to_string(kind)), kind);
  }
}

TEST(Trace, DetailFields) {
  EXPECT_EQ(detail_field("epoch=3 change=add-cg3", "change"), "add-cg3");
  EXPECT_EQ(detail_field("svv=r1=5.0,r2=3.2", "svv"), "r1=5.0,r2=3.2");
  EXPECT_FALSE(detail_field("epoch=3", "svv").has_value());
  EXPECT_EQ(trace_line_of(0), 2u);
}

}  // namespace
}  // namespace accf
