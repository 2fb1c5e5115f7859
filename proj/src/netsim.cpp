#include "geocollab/netsim.hpp"

#include <algorithm>

#include <json.hpp>

#include "geocollab/errors.hpp"

namespace geocollab {

void LinkParams::validate() const {
  if (!(base_latency_s >= 0.0)) throw ArgumentError("link latency must be >= 0");
  if (!(jitter_s >= 0.0 && jitter_s <= base_latency_s)) {
    throw ArgumentError("link jitter must be in [0, latency]");
  }
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) throw ArgumentError("drop probability must be in [0, 1]");
}

std::string event_log_line(const DeliveredEvent& e) {
  nlohmann::ordered_json j;
  j["t"] = e.t;
  j["to"] = e.to.value;
  j["msg"] = nlohmann::ordered_json::parse(encode_object(e.msg));
  return j.dump();
}

Room::Room(const LinkParams& link, std::uint64_t seed, const MapOrigin& default_origin,
           std::size_t capacity)
    : link_(link), rng_(seed), default_origin_(default_origin), capacity_(capacity) {
  link_.validate();
}

ClientId Room::join_room(Platform platform) { return join_room(platform, default_origin_); }

ClientId Room::join_room(Platform platform, const MapOrigin& local_origin) {
  if (members_.size() >= capacity_) {
    throw RoomFullError("room is full (" + std::to_string(capacity_) + " clients)");
  }
  const ClientId id{next_id_++};
  const std::vector<ClientId> existing = members();
  members_.emplace(id, Member{platform, PeerTable(id, local_origin)});

  const SessionMessage join{id, msg::Join{platform}};
  if (!existing.empty()) ++stats_["join"].sent;
  for (ClientId other : existing) {
    schedule(other, join);
  }
  for (ClientId other : existing) {
    ++stats_["join"].sent;
    schedule(id, SessionMessage{other, msg::Join{members_.at(other).platform}});
  }
  return id;
}

void Room::leave_room(ClientId id) {
  broadcast(id, SessionMessage{id, msg::Leave{}});
  members_.erase(id);
}

void Room::broadcast(ClientId from, const SessionMessage& m) {
  if (!members_.contains(from)) {
    throw ArgumentError("broadcast from unknown client " + std::to_string(from.value));
  }
  if (m.from != from) throw ArgumentError("message sender does not match broadcasting client");
  validate(m);

  MessageStats& st = stats_[std::string(type_name(m))];
  ++st.sent;
  for (const auto& [to, unused] : members_) {
    if (to == from) continue;
    schedule(to, m);
  }
}

void Room::schedule(ClientId to, const SessionMessage& m) {
  double deliver_at = clock_ + link_.base_latency_s;
  if (link_.jitter_s > 0.0) {
    deliver_at += std::uniform_real_distribution<double>(-link_.jitter_s, link_.jitter_s)(rng_);
  }
  if (!is_reliable(m) && link_.drop_prob > 0.0) {
    if (std::bernoulli_distribution(link_.drop_prob)(rng_)) {
      ++stats_[std::string(type_name(m))].dropped;
      return;
    }
  }

  PairState& pair = pairs_[{m.from, to}];
  deliver_at = std::max(deliver_at, pair.last_deliver_at);
  pair.last_deliver_at = deliver_at;
  if (const auto* pose = std::get_if<msg::Pose>(&m.body)) last_pose_[{m.from, to}] = *pose;
  queue_.push(Pending{deliver_at, m.from, pair.next_seq++, to, m});
}

std::vector<DeliveredEvent> Room::run_until(double t) {
  if (t < clock_) throw ArgumentError("cannot run the room backwards in time");
  std::vector<DeliveredEvent> delivered;
  while (!queue_.empty() && queue_.top().deliver_at <= t) {
    Pending ev = queue_.top();
    queue_.pop();
    const auto it = members_.find(ev.to);
    if (it == members_.end()) continue;
    it->second.table.ingest(ev.msg);
    ++stats_[std::string(type_name(ev.msg))].delivered;
    delivered.push_back(DeliveredEvent{ev.deliver_at, ev.to, std::move(ev.msg)});
  }
  clock_ = t;
  log_.insert(log_.end(), delivered.begin(), delivered.end());
  return delivered;
}

std::vector<ClientId> Room::members() const {
  std::vector<ClientId> ids;
  ids.reserve(members_.size());
  for (const auto& [id, unused] : members_) ids.push_back(id);
  return ids;
}

const Room::Member& Room::member(ClientId id) const {
  const auto it = members_.find(id);
  if (it == members_.end()) throw ArgumentError("unknown client " + std::to_string(id.value));
  return it->second;
}

Platform Room::platform(ClientId id) const {
  return member(id).platform;
}

const PeerTable& Room::peer_table(ClientId id) const {
  return member(id).table;
}

std::optional<msg::Pose> Room::last_scheduled_pose(ClientId from, ClientId to) const {
  const auto it = last_pose_.find({from, to});
  if (it == last_pose_.end()) return std::nullopt;
  return it->second;
}

}  // namespace geocollab
