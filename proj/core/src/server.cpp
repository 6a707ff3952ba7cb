#include "accf/server.hpp"

#include <algorithm>

namespace accf {

namespace {

const std::vector<Version> kEmptyChain;

TraceRecord make_record(const ServerId& self, TraceKind kind) {
  TraceRecord record;
  record.actor = self.str();
  record.kind = kind;
  return record;
}

/// Inserts in version order; returns false for an already-present write.
bool insert_version(std::vector<Version>& chain, const Version& version) {
  auto pos = chain.end();
  while (pos != chain.begin()) {
    auto prev = std::prev(pos);
    auto cmp = version_order(*prev, version);
    if (cmp == 0) return false;
    if (cmp < 0) break;
    pos = prev;
  }
  chain.insert(pos, version);
  return true;
}

}  // namespace

Server::Server(ServerId id, std::shared_ptr<const GroupConfig> config, ProtocolParams params)
    : id_(std::move(id)), config_(std::move(config)), params_(params) {
  if (!config_->has_server(id_)) throw GroupingError("server " + id_.str() + " is not configured");
  rebuild_derived_state();
}

void Server::rebuild_derived_state() {
  own_group_ = config_->tracking_group(id_);
  key_peers_ = config_->key_sharing_peers(id_);
  const bool hosts_anything =
      std::any_of(config_->placement.begin(), config_->placement.end(),
                  [&](const auto& entry) { return entry.second.contains(id_); });

  vv_sources_.clear();
  for (const auto& [group, members] : config_->tracking) {
    auto& sources = vv_sources_[group];
    for (const auto& member : members) {
      if (key_peers_.contains(member) || (member == id_ && hosts_anything)) sources.insert(member);
    }
    recompute_vv_entry(group);
  }

  gossip_peers_ = config_->checking_peers(id_);
  const auto groups = config_->checking_groups(id_);
  std::erase_if(svv_, [&](const auto& entry) { return !groups.contains(entry.first); });
  for (const auto& group : groups) svv_.try_emplace(group);
  refresh_stable_vectors();
}

const VersionVector* Server::stable_vector(const CheckingGroupId& cg) const {
  auto it = svv_.find(cg);
  return it == svv_.end() ? nullptr : &it->second;
}

const std::vector<Version>& Server::chain(const Key& key) const {
  auto it = store_.find(key);
  return it == store_.end() ? kEmptyChain : it->second;
}

HlcTimestamp Server::peer_latest(const ServerId& peer) const {
  auto it = peer_latest_.find(peer);
  return it == peer_latest_.end() ? HlcTimestamp{} : it->second;
}

void Server::start(sim::Context& ctx) {
  ctx.schedule_periodic(params_.heartbeat_ms, kHeartbeatTimer);
  ctx.schedule_periodic(params_.gossip_ms, kGossipTimer);
}

void Server::receive(const Envelope& envelope, sim::Context& ctx) {
  if (envelope.link_seq == 0) {
    dispatch(envelope, ctx);
    return;
  }
  // Server-to-server links are numbered; restore order and drop duplicates.
  auto& link = inbound_[envelope.from];
  if (envelope.link_seq < link.next) return;
  if (envelope.link_seq > link.next) {
    link.held.try_emplace(envelope.link_seq, envelope);
    return;
  }
  dispatch(envelope, ctx);
  ++link.next;
  for (auto it = link.held.find(link.next); it != link.held.end(); it = link.held.find(link.next)) {
    Envelope next = std::move(it->second);
    link.held.erase(it);
    dispatch(next, ctx);
    ++link.next;
  }
}

void Server::dispatch(const Envelope& envelope, sim::Context& ctx) {
  const auto& from = envelope.from;
  std::visit(
      [&](const auto& msg) {
        using T = std::decay_t<decltype(msg)>;
        if constexpr (std::is_same_v<T, PutReq>) {
          handle_put_req(ClientId{from}, msg, ctx);
        } else if constexpr (std::is_same_v<T, GetReq>) {
          handle_get_req(ClientId{from}, msg, ctx);
        } else if constexpr (std::is_same_v<T, Replicate>) {
          handle_replicate(ServerId{from}, msg, ctx);
        } else if constexpr (std::is_same_v<T, Heartbeat>) {
          handle_heartbeat(ServerId{from}, msg, ctx);
        } else if constexpr (std::is_same_v<T, VvGossip>) {
          handle_vv_gossip(ServerId{from}, msg, ctx);
        } else if constexpr (std::is_same_v<T, Reconfigure>) {
          handle_reconfigure(msg, ctx);
        } else {
          throw std::logic_error("server " + id_.str() + " received a client-bound message");
        }
      },
      envelope.payload);
}

void Server::timer(std::uint64_t tag, sim::Context& ctx) {
  if (tag == kHeartbeatTimer) {
    on_heartbeat_timer(ctx);
  } else if (tag == kGossipTimer) {
    on_gossip_timer(ctx);
  } else if (tag >= kGetTimeoutBase) {
    const std::uint64_t ticket = tag - kGetTimeoutBase;
    auto it = std::find_if(pending_.begin(), pending_.end(),
                           [&](const PendingGet& p) { return p.ticket == ticket; });
    if (it == pending_.end()) return;
    PendingGet expired = std::move(*it);
    pending_.erase(it);
    reply_get(expired.client, expired.req, ReplyStatus::kTimeout, nullptr, ctx);
  }
}

void Server::send_to_server(const ServerId& to, Payload payload, sim::Context& ctx) {
  ctx.send(to.str(), std::move(payload), ++outbound_seq_[to.str()]);
}

// Writes ---------------------------------------------------------------------

void Server::handle_put_req(const ClientId& from, const PutReq& req, sim::Context& ctx) {
  auto record = make_record(id_, TraceKind::kPutReq);
  record.key = req.key;
  record.peer = from.str();
  record.origin = id_.str();

  if (!config_->hosts_key(id_, req.key)) {
    record.status = to_string(ReplyStatus::kNotHosted);
    record.ds = req.ds.entries();
    ctx.record(std::move(record));
    ctx.send(from.str(), PutReply{req.key, ReplyStatus::kNotHosted, own_group_, {}});
    return;
  }

  const HlcTimestamp dt = ds_max_timestamp(req.ds);
  const HlcTimestamp ts = clock_.update_for_put(ctx.physical_now(), dt);
  DependencySet own;
  own.raise(own_group_, ts);
  Version version{req.key, req.value, ds_merge(req.ds, own), id_, own_group_};
  insert_version(store_[req.key], version);

  record.wt = ts;
  record.ds = version.ds.entries();
  record.status = to_string(ReplyStatus::kOk);
  record.detail = "v=" + req.value;
  ctx.record(std::move(record));

  ctx.send(from.str(), PutReply{req.key, ReplyStatus::kOk, own_group_, ts});
  for (const auto& host : config_->hosts(req.key)) {
    if (host == id_) continue;
    send_to_server(host, Replicate{req.key, version}, ctx);
    last_send_[host] = ctx.now();
  }
  raise_peer(id_, ts, ctx);
}

void Server::handle_replicate(const ServerId& from, const Replicate& msg, sim::Context& ctx) {
  auto record = make_record(id_, TraceKind::kReplicate);
  record.key = msg.key;
  record.peer = from.str();
  record.origin = msg.version.origin.str();
  record.ds = msg.version.ds.entries();
  record.wt = msg.version.write_time();

  if (!config_->hosts_key(id_, msg.key)) {
    record.status = to_string(ReplyStatus::kNotHosted);
    ctx.record(std::move(record));
    return;
  }
  const bool inserted = insert_version(store_[msg.key], msg.version);
  record.status = inserted ? "OK" : "DUP";
  ctx.record(std::move(record));
  raise_peer(msg.version.origin, msg.version.write_time(), ctx);
}

// Version vectors -----------------------------------------------------------

bool Server::recompute_vv_entry(const TrackingGroupId& group) {
  const auto& sources = vv_sources_[group];
  HlcTimestamp value = HlcTimestamp::infinity();
  for (const auto& source : sources) value = std::min(value, peer_latest(source));
  if (vv_.entries().contains(group) && vv_.at(group) >= value) return false;
  vv_.set(group, value);
  return true;
}

void Server::refresh_stable_vectors() {
  static const VersionVector kUnheard;
  for (auto& [cg, svv] : svv_) {
    VersionVector candidate = vv_;
    for (const auto& member : config_->checking.at(cg)) {
      if (member == id_) continue;
      auto it = peer_vv_cache_.find(member);
      candidate = entrywise_min(candidate, it == peer_vv_cache_.end() ? kUnheard : it->second);
    }
    svv = entrywise_max(svv, candidate);
  }
}

void Server::raise_peer(const ServerId& peer, HlcTimestamp ts, sim::Context& ctx) {
  auto& latest = peer_latest_[peer];
  if (ts <= latest) return;
  latest = ts;
  if (recompute_vv_entry(config_->tracking_group(peer))) {
    refresh_stable_vectors();
    drain_pending(ctx);
  }
}

void Server::handle_heartbeat(const ServerId& from, const Heartbeat& msg, sim::Context& ctx) {
  auto record = make_record(id_, TraceKind::kHeartbeat);
  record.peer = from.str();
  record.wt = msg.timestamp;
  record.status = key_peers_.contains(from) ? "OK" : "IGNORED";
  ctx.record(std::move(record));
  if (key_peers_.contains(from)) raise_peer(from, msg.timestamp, ctx);
}

void Server::on_heartbeat_timer(sim::Context& ctx) {
  const auto now = ctx.now();
  const HlcTimestamp ts = clock_.tick(ctx.physical_now());
  for (const auto& peer : key_peers_) {
    auto it = last_send_.find(peer);
    if (it != last_send_.end() && now - it->second < params_.heartbeat_ms) continue;
    send_to_server(peer, Heartbeat{ts}, ctx);
    last_send_[peer] = now;
  }
  raise_peer(id_, ts, ctx);
}

void Server::record_gossip(const CheckingGroupId& cg, const std::string& peer,
                           std::string status, sim::Context& ctx) {
  auto record = make_record(id_, TraceKind::kGossip);
  record.cg = cg.str();
  record.peer = peer;
  record.status = std::move(status);
  record.ds = vv_.entries();
  if (auto it = svv_.find(cg); it != svv_.end()) {
    record.detail = "svv=" + format_entries(it->second.entries());
  }
  ctx.record(std::move(record));
}

void Server::on_gossip_timer(sim::Context& ctx) {
  for (const auto& peer : gossip_peers_) send_to_server(peer, VvGossip{id_, vv_}, ctx);
  for (const auto& [cg, svv] : svv_) record_gossip(cg, id_.str(), "LOCAL", ctx);
}

void Server::handle_vv_gossip(const ServerId& from, const VvGossip& msg, sim::Context& ctx) {
  if (!gossip_peers_.contains(from)) {
    auto record = make_record(id_, TraceKind::kGossip);
    record.peer = from.str();
    record.status = "IGNORED";
    record.ds = msg.vv.entries();
    ctx.record(std::move(record));
    return;
  }
  auto& cached = peer_vv_cache_[from];
  cached = entrywise_max(cached, msg.vv);
  refresh_stable_vectors();
  for (const auto& [cg, svv] : svv_) {
    if (config_->checking.at(cg).contains(from)) record_gossip(cg, from.str(), "OK", ctx);
  }
}

void Server::handle_reconfigure(const Reconfigure& msg, sim::Context& ctx) {
  auto record = make_record(id_, TraceKind::kReconfig);
  record.peer = "control";
  record.detail = "epoch=" + std::to_string(msg.config->epoch);
  if (!msg.description.empty()) record.detail += " change=" + msg.description;

  const bool stale = msg.config->epoch <= config_->epoch;
  const bool immutable_parts_changed = msg.config->tracking != config_->tracking ||
                                       msg.config->placement != config_->placement ||
                                       !msg.config->has_server(id_);
  if (stale || immutable_parts_changed) {
    record.status = stale ? "STALE" : "REJECTED";
    ctx.record(std::move(record));
    return;
  }
  config_ = msg.config;
  rebuild_derived_state();
  record.status = "OK";
  ctx.record(std::move(record));
}

// Reads ----------------------------------------------------------------------

void Server::handle_get_req(const ClientId& from, const GetReq& req, sim::Context& ctx) {
  auto record = make_record(id_, TraceKind::kGetReq);
  record.key = req.key;
  record.cg = req.cg.str();
  record.ds = req.ds.entries();
  record.peer = from.str();
  ctx.record(record);

  if (!config_->hosts_key(id_, req.key)) {
    reply_get(from, req, ReplyStatus::kNotHosted, nullptr, ctx);
    return;
  }
  if (!svv_.contains(req.cg)) {
    reply_get(from, req, ReplyStatus::kUnknownCheckingGroup, nullptr, ctx);
    return;
  }
  if (dominated_by(req.ds, vv_)) {
    serve(from, req, ctx);
    return;
  }

  PendingGet parked{from, req, next_ticket_++, std::nullopt};
  if (params_.get_timeout_ms > 0) {
    parked.timeout = ctx.schedule_once(params_.get_timeout_ms, kGetTimeoutBase + parked.ticket);
  }
  pending_.push_back(std::move(parked));
  ++parked_total_;
  record.kind = TraceKind::kGetPark;
  record.detail = "vv=" + format_entries(vv_.entries());
  ctx.record(std::move(record));
}

void Server::drain_pending(sim::Context& ctx) {
  std::vector<PendingGet> ready;
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (dominated_by(it->req.ds, vv_)) {
      ready.push_back(std::move(*it));
      it = pending_.erase(it);
    } else {
      ++it;
    }
  }
  for (auto& get : ready) {
    if (get.timeout) ctx.cancel_timer(*get.timeout);
    serve(get.client, get.req, ctx);
  }
}

const Version* Server::select_version(const GetReq& req) const {
  const auto& versions = chain(req.key);
  const auto& svv = svv_.at(req.cg);
  VersionVector bound;
  if (params_.fallback == ReadFallback::kStableJoin) {
    bound = join(svv, req.ds);
  } else if (dominated_by(req.ds, svv)) {
    bound = svv;
  } else {
    return versions.empty() ? nullptr : &versions.back();
  }
  for (auto it = versions.rbegin(); it != versions.rend(); ++it) {
    if (dominated_by(it->ds, bound)) return &*it;
  }
  return nullptr;
}

void Server::serve(const ClientId& client, const GetReq& req, sim::Context& ctx) {
  if (!svv_.contains(req.cg)) {
    reply_get(client, req, ReplyStatus::kUnknownCheckingGroup, nullptr, ctx);
    return;
  }
  const Version* version = select_version(req);
  reply_get(client, req, version ? ReplyStatus::kOk : ReplyStatus::kKeyNotFound, version, ctx);
}

void Server::reply_get(const ClientId& client, const GetReq& req, ReplyStatus status,
                       const Version* version, sim::Context& ctx) {
  GetReply reply{req.key, req.cg, status, std::nullopt};
  if (version) reply.version = *version;
  ctx.send(client.str(), std::move(reply));
}

}  // namespace accf
