#include "geocollab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <tuple>

#include <json.hpp>

#include "geocollab/errors.hpp"
#include "geocollab/trace_io.hpp"

namespace geocollab {

namespace {

using json = nlohmann::json;

double num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ArgumentError(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

GeoCoordinate geo_from(const json& j) {
  try {
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_object()) return {num(j, "lat", NAN), num(j, "lon", NAN)};
  } catch (const DomainError& e) {
    throw ArgumentError(std::string("bad coordinate: ") + e.what());
  }
  throw ArgumentError("coordinate must be [lat, lon] or {lat, lon}");
}

std::vector<double> number_row(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw ArgumentError(std::string(what) + " entries need " + std::to_string(n) + " numbers");
  }
  std::vector<double> out;
  for (const json& v : j) {
    if (!v.is_number()) throw ArgumentError(std::string(what) + " entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

BrushParams brush_from(const json& j) {
  BrushParams b;
  if (!j.is_object()) return b;
  b.brush_type = static_cast<int>(num(j, "kind", b.brush_type));
  b.size_m = num(j, "size", b.size_m);
  if (j.contains("rgba")) {
    const auto rgba = number_row(j["rgba"], 4, "rgba");
    for (std::size_t i = 0; i < 4; ++i) {
      if (rgba[i] < 0 || rgba[i] > 255) throw ArgumentError("rgba entries must be 0..255");
      b.rgba[i] = static_cast<std::uint8_t>(rgba[i]);
    }
  }
  if (b.brush_type < 0 || b.brush_type > 3) throw ArgumentError("brush kind must be 0..3");
  if (!(b.size_m > 0.0)) throw ArgumentError("brush size must be positive");
  return b;
}

Platform platform_from(const json& j) {
  const std::string p = j.is_string() ? j.get<std::string>() : "";
  if (p == "ar") return Platform::kAr;
  if (p == "vr") return Platform::kVr;
  throw ArgumentError("client platform must be \"ar\" or \"vr\"");
}

// Piecewise-linear evaluation of a scripted path.
struct PathState {
  LocalPosition position = LocalPosition::Zero();
  double speed = 0.0;
  double heading = 0.0;
};

PathState path_at(const std::vector<Waypoint>& path, double t) {
  PathState s;
  if (path.empty()) return s;
  if (t <= path.front().t) {
    s.position = {path.front().east_m, path.front().north_m, 0.0};
    return s;
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Waypoint& a = path[i - 1];
    const Waypoint& b = path[i];
    const Eigen::Vector2d d(b.east_m - a.east_m, b.north_m - a.north_m);
    if (d.norm() > 0.0) s.heading = std::atan2(d.y(), d.x()) * 180.0 / std::numbers::pi;
    if (t < b.t) {
      const double f = (t - a.t) / (b.t - a.t);
      s.position = {a.east_m + f * d.x(), a.north_m + f * d.y(), 0.0};
      s.speed = d.norm() / (b.t - a.t);
      return s;
    }
  }
  s.position = {path.back().east_m, path.back().north_m, 0.0};
  return s;
}

enum class ActionKind { kJoin, kVoice, kTick, kStrokeStart, kStrokePoint, kStrokeEnd, kLeave };

struct Action {
  double t;
  std::size_t client;
  int order;
  std::size_t item;  // voice, stroke or point index
  std::size_t sub;
  ActionKind kind;

  auto key() const { return std::tie(t, client, order, item, sub); }
};

}  // namespace

SimScenario parse_sim_scenario(std::string_view json_text) {
  const json root = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (root.is_discarded() || !root.is_object()) throw ArgumentError("scenario is not a JSON object");

  SimScenario sc;
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) throw ArgumentError("seed must be an unsigned integer");
    sc.seed = root["seed"].get<std::uint64_t>();
    sc.has_seed = true;
  }
  if (root.contains("origin")) sc.origin = geo_from(root["origin"]);
  sc.duration_s = num(root, "duration", sc.duration_s);
  sc.tick_hz = num(root, "tick_hz", sc.tick_hz);
  if (!(sc.duration_s > 0.0)) throw ArgumentError("duration must be positive");
  if (!(sc.tick_hz > 0.0)) throw ArgumentError("tick_hz must be positive");
  if (root.contains("link")) {
    const json& l = root["link"];
    sc.link.base_latency_s = num(l, "latency", sc.link.base_latency_s);
    sc.link.jitter_s = num(l, "jitter", sc.link.jitter_s);
    sc.link.drop_prob = num(l, "drop", sc.link.drop_prob);
  }
  sc.link.validate();

  if (!root.contains("clients") || !root["clients"].is_array()) {
    throw ArgumentError("scenario needs a 'clients' array");
  }
  for (const json& c : root["clients"]) {
    if (!c.is_object()) throw ArgumentError("client entries must be objects");
    ClientScript cs;
    cs.platform = platform_from(c.value("platform", json()));
    if (c.contains("origin")) cs.origin = geo_from(c["origin"]);
    const json script = c.value("script", json::object());
    cs.join_at = num(script, "join_at", 0.0);
    if (script.contains("leave_at")) cs.leave_at = num(script, "leave_at", cs.leave_at);
    for (const json& w : script.value("path", json::array())) {
      const auto r = number_row(w, 3, "path");
      if (!cs.path.empty() && !(r[0] > cs.path.back().t)) {
        throw ArgumentError("path waypoint times must increase");
      }
      cs.path.push_back({r[0], r[1], r[2]});
    }
    for (const json& v : script.value("voice", json::array())) {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_string()) {
        throw ArgumentError("voice entries are [t, \"2d\"|\"3d\"]");
      }
      const std::string mode = v[1].get<std::string>();
      if (mode != "2d" && mode != "3d") throw ArgumentError("voice mode must be 2d or 3d");
      cs.voice.emplace_back(v[0].get<double>(), mode == "2d" ? VoiceMode::k2d : VoiceMode::k3d);
    }
    for (const json& s : script.value("strokes", json::array())) {
      ScriptedStroke st;
      st.t_start = num(s, "start", 0.0);
      st.t_end = num(s, "end", st.t_start);
      if (st.t_end < st.t_start) throw ArgumentError("stroke end precedes its start");
      st.brush = brush_from(s.value("brush", json()));
      for (const json& p : s.value("points", json::array())) {
        const auto r = number_row(p, 3, "stroke point");
        st.points.emplace_back(r[0], r[1], r[2]);
      }
      if (st.points.empty()) throw ArgumentError("strokes need at least one point");
      cs.strokes.push_back(std::move(st));
    }
    sc.clients.push_back(std::move(cs));
  }
  return sc;
}

SimScenario load_sim_scenario(const std::filesystem::path& path) {
  return parse_sim_scenario(read_text_file(path));
}

SimResult run_scenario(const SimScenario& sc, std::uint64_t seed) {
  SimResult res{Room(sc.link, seed, MapOrigin(sc.origin)), {}, {}, {}, {}, 0.0};
  res.ids.resize(sc.clients.size());

  std::vector<Action> actions;
  for (std::size_t i = 0; i < sc.clients.size(); ++i) {
    const ClientScript& cs = sc.clients[i];
    const double stop = std::min(cs.leave_at, sc.duration_s);
    actions.push_back({cs.join_at, i, 0, 0, 0, ActionKind::kJoin});
    for (std::size_t v = 0; v < cs.voice.size(); ++v) {
      if (cs.voice[v].first >= cs.join_at && cs.voice[v].first < stop) {
        actions.push_back({cs.voice[v].first, i, 1, v, 0, ActionKind::kVoice});
      }
    }
    for (auto k = static_cast<std::size_t>(std::ceil(cs.join_at * sc.tick_hz));; ++k) {
      const double t = static_cast<double>(k) / sc.tick_hz;
      if (t > stop) break;
      actions.push_back({t, i, 2, 0, 0, ActionKind::kTick});
    }
    for (std::size_t s = 0; s < cs.strokes.size(); ++s) {
      const ScriptedStroke& st = cs.strokes[s];
      if (st.t_start < cs.join_at || st.t_end >= cs.leave_at) {
        throw ArgumentError("stroke outside the client's session window");
      }
      actions.push_back({st.t_start, i, 3, s, 0, ActionKind::kStrokeStart});
      const std::size_t n = st.points.size();
      for (std::size_t p = 1; p < n; ++p) {
        const double t = st.t_start + (st.t_end - st.t_start) * static_cast<double>(p) /
                                          static_cast<double>(n - 1);
        actions.push_back({t, i, 3, s, p, ActionKind::kStrokePoint});
      }
      actions.push_back({st.t_end, i, 3, s, n, ActionKind::kStrokeEnd});
    }
    if (cs.leave_at <= sc.duration_s) actions.push_back({cs.leave_at, i, 9, 0, 0, ActionKind::kLeave});
  }
  std::sort(actions.begin(), actions.end(),
            [](const Action& a, const Action& b) { return a.key() < b.key(); });

  std::vector<std::optional<LocalClient>> clients(sc.clients.size());
  Room& room = res.room;
  for (const Action& a : actions) {
    room.run_until(std::max(a.t, room.clock()));
    const ClientScript& cs = sc.clients[a.client];
    std::optional<LocalClient>& client = clients[a.client];
    const MapOrigin origin(cs.origin.value_or(sc.origin));

    switch (a.kind) {
      case ActionKind::kJoin: {
        const ClientId id = room.join_room(cs.platform, origin);
        res.ids[a.client] = id;
        std::optional<Corrector> corrector;
        if (cs.platform == Platform::kAr) {
          // The initial GPS fix anchors the corrector at the start position.
          const LocalPosition start = path_at(cs.path, a.t).position;
          const GpsFix fix{a.t, local_to_geo(origin, start)};
          corrector = Corrector::init(std::span<const GpsFix>(&fix, 1),
                                      SlamPose{a.t, 0.0, 0.0, 0.0, 0.0}, Alignment::identity());
        }
        client.emplace(id, cs.platform, origin, corrector);
        break;
      }
      case ActionKind::kVoice:
        room.broadcast(client->id(), client->set_voice(cs.voice[a.item].second));
        break;
      case ActionKind::kTick: {
        const PathState s = path_at(cs.path, a.t);
        if (cs.platform == Platform::kAr) {
          const LocalPosition start = path_at(cs.path, cs.join_at).position;
          const LocalPosition d = s.position - start;
          room.broadcast(client->id(),
                         client->pose_from_slam(SlamPose{a.t, d.x(), 0.0, d.y(), s.heading}));
        } else {
          room.broadcast(client->id(), client->pose_from_virtual(a.t, s.position, s.heading));
        }
        if (auto avatar = client->update_speed(s.speed)) room.broadcast(client->id(), *avatar);
        break;
      }
      case ActionKind::kStrokeStart: {
        const ScriptedStroke& st = cs.strokes[a.item];
        const SessionMessage m = client->begin_stroke(st.points.front(), st.brush);
        res.strokes.push_back({client->id(), std::get<msg::StrokeStart>(m.body).stroke_id, origin,
                               st.points});
        room.broadcast(client->id(), m);
        break;
      }
      case ActionKind::kStrokePoint:
        room.broadcast(client->id(), client->add_stroke_point(cs.strokes[a.item].points[a.sub]));
        break;
      case ActionKind::kStrokeEnd:
        room.broadcast(client->id(), client->end_stroke());
        break;
      case ActionKind::kLeave:
        room.leave_room(client->id());
        client.reset();
        break;
    }
  }

  const double last = std::max(sc.duration_s, room.clock());
  res.end_time = last + sc.link.base_latency_s + sc.link.jitter_s;
  room.run_until(res.end_time);
  for (const auto& c : clients) {
    if (!c) continue;
    res.final_avatar[c->id()] = c->avatar();
    res.final_voice[c->id()] = c->voice();
  }
  return res;
}

std::string event_log_jsonl(const Room& room) {
  std::string out;
  for (const DeliveredEvent& e : room.log()) out += event_log_line(e) + '\n';
  return out;
}

std::string stats_summary(const Room& room) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-14s %10s %10s %10s\n", "type", "sent", "delivered", "dropped");
  out += buf;
  for (const auto& [type, st] : room.stats()) {
    std::snprintf(buf, sizeof(buf), "%-14s %10llu %10llu %10llu\n", type.c_str(),
                  static_cast<unsigned long long>(st.sent),
                  static_cast<unsigned long long>(st.delivered),
                  static_cast<unsigned long long>(st.dropped));
    out += buf;
  }
  return out;
}

}  // namespace geocollab
