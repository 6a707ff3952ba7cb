#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "accf/config.hpp"
#include "accf/hlc.hpp"
#include "accf/message.hpp"
#include "accf/simulator.hpp"

namespace accf {

/// Timer tags used by Server.
enum ServerTimer : std::uint64_t {
  kHeartbeatTimer = 1,
  kGossipTimer = 2,
  kGetTimeoutBase = 1u << 20,
};

/// The replica state machine: version chains, the version vector over
/// tracking groups, one stable vector per checking group, and the queue of
/// GETs waiting for dependencies to arrive.
///
/// VV[t] is the minimum of the latest timestamps received from the servers of
/// tracking group t that share a key class with this server (itself included
/// when it hosts anything), or infinity when there are none. SVV[cg] is the
/// entry-wise minimum of this server's VV and the last VV gossiped by every
/// other member of cg; members not heard from yet contribute zeros.
class Server final : public sim::Actor {
 public:
  Server(ServerId id, std::shared_ptr<const GroupConfig> config, ProtocolParams params);

  void start(sim::Context& ctx) override;
  void receive(const Envelope& envelope, sim::Context& ctx) override;
  void timer(std::uint64_t tag, sim::Context& ctx) override;

  void handle_put_req(const ClientId& from, const PutReq& req, sim::Context& ctx);
  void handle_get_req(const ClientId& from, const GetReq& req, sim::Context& ctx);
  void handle_replicate(const ServerId& from, const Replicate& msg, sim::Context& ctx);
  void handle_heartbeat(const ServerId& from, const Heartbeat& msg, sim::Context& ctx);
  void handle_vv_gossip(const ServerId& from, const VvGossip& msg, sim::Context& ctx);
  void handle_reconfigure(const Reconfigure& msg, sim::Context& ctx);
  void on_heartbeat_timer(sim::Context& ctx);
  void on_gossip_timer(sim::Context& ctx);

  const ServerId& id() const noexcept { return id_; }
  const GroupConfig& config() const noexcept { return *config_; }
  HlcTimestamp clock() const noexcept { return clock_.current(); }
  const VersionVector& version_vector() const noexcept { return vv_; }
  /// nullptr when this server is not a member of `cg`.
  const VersionVector* stable_vector(const CheckingGroupId& cg) const;
  /// Oldest first under version_order; empty when the key has no versions.
  const std::vector<Version>& chain(const Key& key) const;
  const std::map<Key, std::vector<Version>>& store() const noexcept { return store_; }
  HlcTimestamp peer_latest(const ServerId& peer) const;
  std::size_t pending_gets() const noexcept { return pending_.size(); }
  std::uint64_t parked_total() const noexcept { return parked_total_; }

 private:
  struct PendingGet {
    ClientId client;
    GetReq req;
    std::uint64_t ticket = 0;
    std::optional<sim::TimerId> timeout;
  };
  struct InboundLink {
    std::uint64_t next = 1;
    std::map<std::uint64_t, Envelope> held;
  };

  void dispatch(const Envelope& envelope, sim::Context& ctx);
  void rebuild_derived_state();
  void send_to_server(const ServerId& to, Payload payload, sim::Context& ctx);

  void raise_peer(const ServerId& peer, HlcTimestamp ts, sim::Context& ctx);
  /// Recomputes VV[group]; returns true when it changed.
  bool recompute_vv_entry(const TrackingGroupId& group);
  void refresh_stable_vectors();
  void drain_pending(sim::Context& ctx);

  void serve(const ClientId& client, const GetReq& req, sim::Context& ctx);
  const Version* select_version(const GetReq& req) const;
  void reply_get(const ClientId& client, const GetReq& req, ReplyStatus status,
                 const Version* version, sim::Context& ctx);
  void record_gossip(const CheckingGroupId& cg, const std::string& peer,
                     std::string status, sim::Context& ctx);

  ServerId id_;
  std::shared_ptr<const GroupConfig> config_;
  ProtocolParams params_;
  HybridLogicalClock clock_;

  std::map<Key, std::vector<Version>> store_;
  std::map<ServerId, HlcTimestamp> peer_latest_;
  VersionVector vv_;
  std::map<CheckingGroupId, VersionVector> svv_;
  std::map<ServerId, VersionVector> peer_vv_cache_;
  std::deque<PendingGet> pending_;
  std::map<ServerId, sim::SimTime> last_send_;

  // Derived from the config snapshot.
  TrackingGroupId own_group_;
  std::set<ServerId> key_peers_;
  std::map<TrackingGroupId, std::set<ServerId>> vv_sources_;
  std::set<ServerId> gossip_peers_;

  std::map<std::string, InboundLink> inbound_;
  std::map<std::string, std::uint64_t> outbound_seq_;
  std::uint64_t next_ticket_ = 1;
  std::uint64_t parked_total_ = 0;
};

}  // namespace accf
