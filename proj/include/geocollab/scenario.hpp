#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geocollab/netsim.hpp"
#include "geocollab/session.hpp"

namespace geocollab {

/// Position of a scripted user in their own map frame at time t.
struct Waypoint {
  double t = 0.0;
  double east_m = 0.0;
  double north_m = 0.0;
};

struct ScriptedStroke {
  double t_start = 0.0;
  double t_end = 0.0;
  BrushParams brush;
  std::vector<LocalPosition> points;  // map frame of the drawing client
};

struct ClientScript {
  Platform platform = Platform::kVr;
  std::optional<GeoCoordinate> origin;  // defaults to the session origin
  double join_at = 0.0;
  double leave_at = std::numeric_limits<double>::infinity();
  std::vector<Waypoint> path;  // piecewise linear; empty means standing at the origin
  std::vector<std::pair<double, VoiceMode>> voice;
  std::vector<ScriptedStroke> strokes;
};

struct SimScenario {
  std::uint64_t seed = 42;
  bool has_seed = false;
  GeoCoordinate origin;
  double duration_s = 10.0;
  double tick_hz = 10.0;  // pose broadcast rate
  LinkParams link;
  std::vector<ClientScript> clients;
};

/// {seed, origin:[lat,lon], duration, tick_hz, link:{latency,jitter,drop},
///  clients:[{platform:"ar"|"vr", origin?, script:{join_at, leave_at, path:[[t,e,n]...],
///  voice:[[t,"2d"|"3d"]...], strokes:[{start,end,brush:{kind,size,rgba},points:[[e,n,u]...]}]}}]}
SimScenario parse_sim_scenario(std::string_view json_text);
SimScenario load_sim_scenario(const std::filesystem::path& path);

/// A stroke as its author drew it, for end-to-end checks.
struct AuthoredStroke {
  ClientId author;
  std::uint32_t stroke_id = 0;
  MapOrigin author_origin;
  std::vector<LocalPosition> points;
};

struct SimResult {
  Room room;
  std::vector<ClientId> ids;  // per script entry, in scenario order
  std::vector<AuthoredStroke> strokes;
  std::map<ClientId, AvatarState> final_avatar;
  std::map<ClientId, VoiceMode> final_voice;
  double end_time = 0.0;
};

/// Runs the scripted session to quiescence. Throws RoomFullError when the
/// script joins more clients than the room holds.
SimResult run_scenario(const SimScenario& scenario, std::uint64_t seed);

std::string event_log_jsonl(const Room& room);
/// Per-type sent/delivered/dropped table.
std::string stats_summary(const Room& room);

}  // namespace geocollab
