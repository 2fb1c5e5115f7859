#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Core>

#include "geocollab/geodesy.hpp"
#include "geocollab/tracking.hpp"

namespace geocollab {

/// Decimal places carried by geo fields on the wire.
inline constexpr int kWireDecimals = 5;
inline constexpr int kWireVersion = 1;

struct ClientId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ClientId&, const ClientId&) = default;
};

enum class Platform { kAr, kVr };
enum class AvatarState { kIdle, kWalking };
enum class VoiceMode { k2d, k3d };

struct BrushParams {
  int brush_type = 0;  // one of four presets, 0..3
  double size_m = 0.01;
  std::array<std::uint8_t, 4> rgba{255, 255, 255, 255};

  friend bool operator==(const BrushParams&, const BrushParams&) = default;
};

namespace msg {

struct Join {
  Platform platform = Platform::kVr;
  friend bool operator==(const Join&, const Join&) = default;
};

struct Leave {
  friend bool operator==(const Leave&, const Leave&) = default;
};

struct Pose {
  double t = 0.0;
  GeoCoordinate geo;  // at most kWireDecimals places
  double heading_deg = 0.0;
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct Avatar {
  AvatarState state = AvatarState::kIdle;
  friend bool operator==(const Avatar&, const Avatar&) = default;
};

struct Voice {
  VoiceMode mode = VoiceMode::k3d;
  friend bool operator==(const Voice&, const Voice&) = default;
};

struct StrokeStart {
  std::uint32_t stroke_id = 0;
  GeoCoordinate anchor;  // at most kWireDecimals places
  BrushParams brush;
  friend bool operator==(const StrokeStart&, const StrokeStart&) = default;
};

/// Offset of a stroke point from the stroke's first point, full precision.
struct StrokePoint {
  std::uint32_t stroke_id = 0;
  Eigen::Vector3d rel = Eigen::Vector3d::Zero();
  friend bool operator==(const StrokePoint& a, const StrokePoint& b) {
    return a.stroke_id == b.stroke_id && a.rel == b.rel;
  }
};

struct StrokeEnd {
  std::uint32_t stroke_id = 0;
  friend bool operator==(const StrokeEnd&, const StrokeEnd&) = default;
};

}  // namespace msg

using MessageBody = std::variant<msg::Join, msg::Leave, msg::Pose, msg::Avatar, msg::Voice,
                                 msg::StrokeStart, msg::StrokePoint, msg::StrokeEnd>;

struct SessionMessage {
  ClientId from;
  MessageBody body;

  friend bool operator==(const SessionMessage&, const SessionMessage&) = default;
};

/// Wire type tag ("pose", "stroke_point", ...).
std::string_view type_name(const SessionMessage& m);
/// Poses are the only unreliable message class.
bool is_reliable(const SessionMessage& m);

/// Throws EncodeError when `m` violates a message invariant.
void validate(const SessionMessage& m);

/// One JSON object without the trailing LF, fields in wire order.
std::string encode_object(const SessionMessage& m);
/// encode_object(m) followed by LF.
std::string encode(const SessionMessage& m);
/// Accepts a single JSON object with or without a trailing LF.
SessionMessage decode(std::string_view line);

/// AR: the corrected fix from the tracking corrector.
SessionMessage make_pose_message(ClientId from, const CorrectedFix& fix, const MapOrigin& origin);
/// VR: the user's position in the virtual map frame.
SessionMessage make_pose_message(ClientId from, double t, const LocalPosition& virtual_position,
                                 double heading_deg, const MapOrigin& origin);

inline constexpr double kWalkStartMps = 0.30;
inline constexpr double kWalkStopMps = 0.15;

/// Idle->Walking above 0.30 m/s, Walking->Idle below 0.15 m/s.
AvatarState avatar_state_from_speed(AvatarState current, double speed_mps);

struct PhotosphereParams {
  double s_min = 1.0;
  double s_max = 10.0;
  double d_range = 20.0;
};

/// Linear from s_max at the sphere center down to s_min at d_range.
double photosphere_scale(double d_m, const PhotosphereParams& params);

struct VoiceParams {
  double ref_dist = 1.0;
  double max_dist = 50.0;
};

/// 2D is distance independent; 3D is 1 inside ref_dist, ref_dist/d out to
/// max_dist and silent beyond.
double voice_gain(VoiceMode mode, double d_m, const VoiceParams& params);

std::string_view to_string(Platform p);
std::string_view to_string(AvatarState s);
std::string_view to_string(VoiceMode v);

}  // namespace geocollab
