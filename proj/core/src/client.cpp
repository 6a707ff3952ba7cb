#include "accf/client.hpp"

#include <array>
#include <stdexcept>
#include <utility>

#include "accf/trace.hpp"

namespace accf {

namespace {

constexpr std::array<std::pair<ReplyStatus, std::string_view>, 5> kStatusNames{{
    {ReplyStatus::kOk, "OK"},
    {ReplyStatus::kKeyNotFound, "KEY_NOT_FOUND"},
    {ReplyStatus::kUnknownCheckingGroup, "UNKNOWN_CG"},
    {ReplyStatus::kNotHosted, "NOT_HOSTED"},
    {ReplyStatus::kTimeout, "TIMEOUT"},
}};

}  // namespace

std::string_view to_string(ReplyStatus status) {
  for (const auto& [value, name] : kStatusNames) {
    if (value == status) return name;
  }
  return "?";
}

ReplyStatus parse_reply_status(std::string_view text) {
  for (const auto& [value, name] : kStatusNames) {
    if (name == text) return value;
  }
  throw std::invalid_argument("unknown reply status: " + std::string(text));
}

ClientSession::ClientSession(ClientId id, LoadBalancer lb, std::optional<CheckingGroupId> default_cg)
    : id_(std::move(id)), lb_(std::move(lb)), default_cg_(std::move(default_cg)) {}

GetReq ClientSession::make_get(const Key& key, const CheckingGroupId& cg) const {
  return GetReq{key, cg, ds_};
}

GetOutcome ClientSession::apply_get_reply(const GetReply& reply) {
  GetOutcome outcome;
  outcome.status = reply.status;
  if (reply.status == ReplyStatus::kOk && reply.version) {
    ds_ = ds_merge(ds_, reply.version->ds);
    outcome.value = reply.version->value;
    outcome.write_time = reply.version->write_time();
    outcome.origin = reply.version->origin;
  }
  return outcome;
}

PutReq ClientSession::make_put(const Key& key, Value value) const {
  return PutReq{key, std::move(value), ds_};
}

PutOutcome ClientSession::apply_put_reply(const PutReply& reply) {
  if (reply.status == ReplyStatus::kOk) ds_.raise(reply.tg, reply.ut);
  return PutOutcome{reply.status, reply.tg, reply.ut};
}

ClientActor::ClientActor(ClientId id, LoadBalancer lb) : session_(std::move(id), std::move(lb)) {}

void ClientActor::get(const Key& key, const CheckingGroupId& cg, sim::Context& ctx,
                      std::optional<ServerId> server) {
  if (busy()) throw std::logic_error("client " + session_.id().str() + " already has a request outstanding");
  ServerId target = server ? *server : session_.route(key);
  outstanding_ = Outstanding{key, target, true};
  ctx.send(target.str(), session_.make_get(key, cg));
}

void ClientActor::put(const Key& key, Value value, sim::Context& ctx, std::optional<ServerId> server) {
  if (busy()) throw std::logic_error("client " + session_.id().str() + " already has a request outstanding");
  ServerId target = server ? *server : session_.route(key);
  outstanding_ = Outstanding{key, target, false};
  ctx.send(target.str(), session_.make_put(key, std::move(value)));
}

void ClientActor::receive(const Envelope& envelope, sim::Context& ctx) {
  TraceRecord record;
  record.actor = session_.id().str();
  record.peer = envelope.from;

  if (const auto* reply = std::get_if<GetReply>(&envelope.payload)) {
    outstanding_.reset();
    ++completed_gets_;
    const GetOutcome outcome = session_.apply_get_reply(*reply);
    record.kind = TraceKind::kGetReply;
    record.key = reply->key;
    record.cg = reply->cg.str();
    record.status = to_string(reply->status);
    if (reply->version) {
      record.wt = reply->version->write_time();
      record.ds = reply->version->ds.entries();
      record.origin = reply->version->origin.str();
      record.detail = "v=" + reply->version->value;
    }
    ctx.record(std::move(record));
    on_get(reply->key, outcome, ctx);
    return;
  }
  if (const auto* reply = std::get_if<PutReply>(&envelope.payload)) {
    outstanding_.reset();
    ++completed_puts_;
    const PutOutcome outcome = session_.apply_put_reply(*reply);
    record.kind = TraceKind::kPutAck;
    record.key = reply->key;
    record.status = to_string(reply->status);
    if (reply->status == ReplyStatus::kOk) {
      record.wt = reply->ut;
      record.origin = envelope.from;
    }
    record.ds = session_.dependencies().entries();
    ctx.record(std::move(record));
    on_put(reply->key, outcome, ctx);
    return;
  }
  throw std::logic_error("client " + session_.id().str() + " received a server-bound message");
}

}  // namespace accf
