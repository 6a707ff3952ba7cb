#pragma once

#include <functional>
#include <optional>

#include "accf/message.hpp"
#include "accf/simulator.hpp"

namespace accf {

using LoadBalancer = std::function<ServerId(const Key&)>;

struct GetOutcome {
  ReplyStatus status = ReplyStatus::kOk;
  std::optional<Value> value;
  std::optional<HlcTimestamp> write_time;
  std::optional<ServerId> origin;
};

struct PutOutcome {
  ReplyStatus status = ReplyStatus::kOk;
  TrackingGroupId tg;
  HlcTimestamp ut;
};

/// Client-side dependency tracking. DS only grows over the session.
class ClientSession {
 public:
  ClientSession(ClientId id, LoadBalancer lb,
                std::optional<CheckingGroupId> default_cg = std::nullopt);

  const ClientId& id() const noexcept { return id_; }
  const DependencySet& dependencies() const noexcept { return ds_; }
  const std::optional<CheckingGroupId>& default_cg() const noexcept { return default_cg_; }

  ServerId route(const Key& key) const { return lb_(key); }

  GetReq make_get(const Key& key, const CheckingGroupId& cg) const;
  /// DS ← max(DS, d.ds) on success.
  GetOutcome apply_get_reply(const GetReply& reply);

  PutReq make_put(const Key& key, Value value) const;
  /// DS ← max(DS, ⟨tg, ut⟩) on success.
  PutOutcome apply_put_reply(const PutReply& reply);

 private:
  ClientId id_;
  LoadBalancer lb_;
  std::optional<CheckingGroupId> default_cg_;
  DependencySet ds_;
};

/// Simulator adapter for a session: one outstanding request at a time, with
/// GET_REPLY / PUT_ACK trace records. Workloads derive from it.
class ClientActor : public sim::Actor {
 public:
  ClientActor(ClientId id, LoadBalancer lb);

  void receive(const Envelope& envelope, sim::Context& ctx) final;

  const ClientSession& session() const noexcept { return session_; }
  bool busy() const noexcept { return outstanding_.has_value(); }
  std::uint64_t completed_gets() const noexcept { return completed_gets_; }
  std::uint64_t completed_puts() const noexcept { return completed_puts_; }

 protected:
  /// Throws std::logic_error while another request is outstanding.
  void get(const Key& key, const CheckingGroupId& cg, sim::Context& ctx,
           std::optional<ServerId> server = std::nullopt);
  void put(const Key& key, Value value, sim::Context& ctx,
           std::optional<ServerId> server = std::nullopt);

  virtual void on_get(const Key&, const GetOutcome&, sim::Context&) {}
  virtual void on_put(const Key&, const PutOutcome&, sim::Context&) {}

 private:
  struct Outstanding {
    Key key;
    ServerId server;
    bool is_get = true;
  };

  ClientSession session_;
  std::optional<Outstanding> outstanding_;
  std::uint64_t completed_gets_ = 0;
  std::uint64_t completed_puts_ = 0;
};

}  // namespace accf
