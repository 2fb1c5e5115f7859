#include "geocollab/session.hpp"

#include <string>

#include "geocollab/errors.hpp"

namespace geocollab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string who(ClientId id) { return "client " + std::to_string(id.value); }

}  // namespace

PeerTable::PeerTable(ClientId self, const MapOrigin& local_origin)
    : self_(self), origin_(local_origin) {}

const RemotePeer* PeerTable::find(ClientId id) const {
  const auto it = peers_.find(id);
  return it == peers_.end() ? nullptr : &it->second;
}

RemotePeer& PeerTable::peer_for(const SessionMessage& m) {
  const auto it = peers_.find(m.from);
  if (it == peers_.end()) {
    throw ProtocolError(std::string(type_name(m)) + " from unknown " + who(m.from));
  }
  return it->second;
}

void PeerTable::ingest(const SessionMessage& m) {
  if (m.from == self_) throw ProtocolError("message echoed back to its sender");

  std::visit(
      Overloaded{
          [&](const msg::Join& b) {
            if (peers_.contains(m.from)) throw ProtocolError("duplicate join from " + who(m.from));
            RemotePeer peer;
            peer.id = m.from;
            peer.platform = b.platform;
            peers_.emplace(m.from, std::move(peer));
          },
          [&](const msg::Leave&) {
            peer_for(m);
            // In-flight strokes of a departed peer are dropped with it.
            peers_.erase(m.from);
          },
          [&](const msg::Pose& b) {
            RemotePeer& peer = peer_for(m);
            if (peer.last_pose && b.t < peer.last_pose->t) {
              throw ProtocolError("stale pose from " + who(m.from));
            }
            peer.last_pose = PeerPose{b.t, geo_to_local(origin_, b.geo), b.heading_deg};
          },
          [&](const msg::Avatar& b) { peer_for(m).avatar = b.state; },
          [&](const msg::Voice& b) { peer_for(m).voice = b.mode; },
          [&](const msg::StrokeStart& b) {
            RemotePeer& peer = peer_for(m);
            if (peer.strokes.contains(b.stroke_id)) {
              throw ProtocolError("stroke id " + std::to_string(b.stroke_id) + " reused by " +
                                  who(m.from));
            }
            Stroke s;
            s.anchor = b.anchor;
            s.brush = b.brush;
            s.points.push_back(Eigen::Vector3d::Zero());
            peer.strokes.emplace(b.stroke_id, std::move(s));
          },
          [&](const msg::StrokePoint& b) {
            RemotePeer& peer = peer_for(m);
            const auto it = peer.strokes.find(b.stroke_id);
            if (it == peer.strokes.end()) {
              throw ProtocolError("stroke point for unknown stroke " +
                                  std::to_string(b.stroke_id) + " from " + who(m.from));
            }
            if (it->second.complete) {
              throw ProtocolError("stroke point after stroke end from " + who(m.from));
            }
            it->second.points.push_back(b.rel);
          },
          [&](const msg::StrokeEnd& b) {
            RemotePeer& peer = peer_for(m);
            const auto it = peer.strokes.find(b.stroke_id);
            if (it == peer.strokes.end()) {
              throw ProtocolError("stroke end for unknown stroke " +
                                  std::to_string(b.stroke_id) + " from " + who(m.from));
            }
            it->second.complete = true;
          },
      },
      m.body);
}

std::vector<LocalPosition> reconstruct_stroke(const Stroke& s, const MapOrigin& local_origin) {
  if (!s.complete) throw StateError("cannot reconstruct an incomplete stroke");
  const LocalPosition anchor = geo_to_local(local_origin, s.anchor);
  std::vector<LocalPosition> out;
  out.reserve(s.points.size());
  for (const Eigen::Vector3d& rel : s.points) out.push_back(anchor + rel);
  return out;
}

LocalClient::LocalClient(ClientId id, Platform platform, const MapOrigin& map_origin,
                         std::optional<Corrector> corrector)
    : id_(id),
      platform_(platform),
      origin_(map_origin),
      corrector_(std::move(corrector)),
      peers_(id, map_origin) {
  if (platform_ == Platform::kAr && !corrector_) {
    throw ArgumentError("AR clients need a GPS corrector");
  }
}

SessionMessage LocalClient::join_message() const { return {id_, msg::Join{platform_}}; }

SessionMessage LocalClient::leave_message() const { return {id_, msg::Leave{}}; }

LocalPosition LocalClient::slam_to_map(const SlamPose& pose) const {
  if (platform_ != Platform::kAr) throw StateError("VR clients have no SLAM input");
  return geo_to_local(origin_, corrector_->correct(pose).geo);
}

SessionMessage LocalClient::pose_from_slam(const SlamPose& pose) const {
  if (platform_ != Platform::kAr) throw StateError("VR clients have no SLAM input");
  return make_pose_message(id_, corrector_->correct(pose), origin_);
}

SessionMessage LocalClient::pose_from_virtual(double t, const LocalPosition& position,
                                              double heading_deg) const {
  if (platform_ != Platform::kVr) throw StateError("AR clients are positioned by the corrector");
  return make_pose_message(id_, t, position, heading_deg, origin_);
}

std::optional<SessionMessage> LocalClient::update_speed(double speed_mps) {
  const AvatarState next = avatar_state_from_speed(avatar_, speed_mps);
  if (next == avatar_) return std::nullopt;
  avatar_ = next;
  return SessionMessage{id_, msg::Avatar{avatar_}};
}

SessionMessage LocalClient::set_voice(VoiceMode mode) {
  voice_ = mode;
  return {id_, msg::Voice{mode}};
}

SessionMessage LocalClient::begin_stroke(const LocalPosition& first_point, const BrushParams& brush) {
  if (active_stroke_) throw StateError("a stroke is already in progress");
  const GeoCoordinate anchor = quantize(local_to_geo(origin_, first_point), kWireDecimals);
  active_stroke_ = ActiveStroke{next_stroke_id_++, first_point};
  return {id_, msg::StrokeStart{active_stroke_->id, anchor, brush}};
}

SessionMessage LocalClient::add_stroke_point(const LocalPosition& point) {
  if (!active_stroke_) throw StateError("no stroke in progress");
  return {id_, msg::StrokePoint{active_stroke_->id, point - active_stroke_->first_point}};
}

SessionMessage LocalClient::end_stroke() {
  if (!active_stroke_) throw StateError("no stroke in progress");
  const std::uint32_t sid = active_stroke_->id;
  active_stroke_.reset();
  return {id_, msg::StrokeEnd{sid}};
}

}  // namespace geocollab
