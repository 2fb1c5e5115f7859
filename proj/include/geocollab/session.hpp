#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "geocollab/geodesy.hpp"
#include "geocollab/protocol.hpp"
#include "geocollab/tracking.hpp"

namespace geocollab {

struct Stroke {
  GeoCoordinate anchor;
  std::vector<Eigen::Vector3d> points;  // relative to the first point; points[0] = 0
  BrushParams brush;
  bool complete = false;
};

struct PeerPose {
  double t = 0.0;
  LocalPosition position = LocalPosition::Zero();
  double heading_deg = 0.0;
};

struct RemotePeer {
  ClientId id;
  Platform platform = Platform::kVr;
  std::optional<PeerPose> last_pose;
  AvatarState avatar = AvatarState::kIdle;
  VoiceMode voice = VoiceMode::k3d;
  std::map<std::uint32_t, Stroke> strokes;  // in-progress and completed
};

/// What one client knows about everyone else. Single owner; feed messages
/// in per-sender FIFO order.
class PeerTable {
 public:
  PeerTable(ClientId self, const MapOrigin& local_origin);

  /// Throws ProtocolError on a message that the session state machine
  /// cannot accept (unknown peer, unknown stroke, duplicate join, ...).
  void ingest(const SessionMessage& m);

  ClientId self() const { return self_; }
  const MapOrigin& local_origin() const { return origin_; }
  const std::map<ClientId, RemotePeer>& peers() const { return peers_; }
  const RemotePeer* find(ClientId id) const;

 private:
  RemotePeer& peer_for(const SessionMessage& m);

  ClientId self_;
  MapOrigin origin_;
  std::map<ClientId, RemotePeer> peers_;
};

/// Points of a completed stroke in the receiver's local frame. Throws
/// StateError for an incomplete stroke.
std::vector<LocalPosition> reconstruct_stroke(const Stroke& s, const MapOrigin& local_origin);

/// The local side of a session: platform-specific pose sourcing, avatar
/// state and stroke authoring. AR clients take poses from the corrector,
/// VR clients from their position in the virtual map.
class LocalClient {
 public:
  LocalClient(ClientId id, Platform platform, const MapOrigin& map_origin,
              std::optional<Corrector> corrector = std::nullopt);

  ClientId id() const { return id_; }
  Platform platform() const { return platform_; }
  const MapOrigin& map_origin() const { return origin_; }
  AvatarState avatar() const { return avatar_; }
  VoiceMode voice() const { return voice_; }
  PeerTable& peer_table() { return peers_; }
  const PeerTable& peer_table() const { return peers_; }

  SessionMessage join_message() const;
  SessionMessage leave_message() const;

  /// AR only.
  SessionMessage pose_from_slam(const SlamPose& pose) const;
  /// VR only.
  SessionMessage pose_from_virtual(double t, const LocalPosition& position, double heading_deg) const;
  /// Map-frame position behind a SLAM pose (AR only).
  LocalPosition slam_to_map(const SlamPose& pose) const;

  /// Returns an avatar message only when the state changes.
  std::optional<SessionMessage> update_speed(double speed_mps);
  SessionMessage set_voice(VoiceMode mode);

  /// Points are in this client's map frame.
  SessionMessage begin_stroke(const LocalPosition& first_point, const BrushParams& brush);
  SessionMessage add_stroke_point(const LocalPosition& point);
  SessionMessage end_stroke();
  bool drawing() const { return active_stroke_.has_value(); }

 private:
  struct ActiveStroke {
    std::uint32_t id;
    LocalPosition first_point;
  };

  ClientId id_;
  Platform platform_;
  MapOrigin origin_;
  std::optional<Corrector> corrector_;
  AvatarState avatar_ = AvatarState::kIdle;
  VoiceMode voice_ = VoiceMode::k3d;
  std::uint32_t next_stroke_id_ = 1;
  std::optional<ActiveStroke> active_stroke_;
  PeerTable peers_;
};

}  // namespace geocollab
