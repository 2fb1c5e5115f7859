#include "geocollab/protocol.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "geocollab/errors.hpp"

namespace geocollab {

namespace {

using ojson = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_wire_geo(const GeoCoordinate& g, std::string_view what) {
  if (!has_at_most_decimals(g.lat_deg, kWireDecimals) ||
      !has_at_most_decimals(g.lon_deg, kWireDecimals)) {
    throw EncodeError(std::string(what) + " geo carries more than 5 decimal places");
  }
  if (!(g.lat_deg >= -90.0 && g.lat_deg <= 90.0 && g.lon_deg >= -180.0 && g.lon_deg < 180.0)) {
    throw EncodeError(std::string(what) + " geo out of range");
  }
}

void require_finite(double v, std::string_view what) {
  if (!std::isfinite(v)) throw EncodeError(std::string(what) + " is not finite");
}

const ojson& field(const ojson& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw DecodeError(std::string("missing field '") + name + "'");
  return *it;
}

double number_field(const ojson& j, const char* name) {
  const ojson& v = field(j, name);
  if (!v.is_number()) throw DecodeError(std::string("field '") + name + "' is not a number");
  return v.get<double>();
}

std::uint32_t id_field(const ojson& j, const char* name) {
  const ojson& v = field(j, name);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    throw DecodeError(std::string("field '") + name + "' is not an unsigned 32-bit id");
  }
  return v.get<std::uint32_t>();
}

std::string string_field(const ojson& j, const char* name) {
  const ojson& v = field(j, name);
  if (!v.is_string()) throw DecodeError(std::string("field '") + name + "' is not a string");
  return v.get<std::string>();
}

GeoCoordinate geo_fields(const ojson& j) {
  const double lat = number_field(j, "lat");
  const double lon = number_field(j, "lon");
  try {
    return GeoCoordinate(lat, lon);
  } catch (const DomainError& e) {
    throw DecodeError(e.what());
  }
}

}  // namespace

std::string_view to_string(Platform p) { return p == Platform::kAr ? "ar" : "vr"; }
std::string_view to_string(AvatarState s) { return s == AvatarState::kIdle ? "idle" : "walking"; }
std::string_view to_string(VoiceMode v) { return v == VoiceMode::k2d ? "2d" : "3d"; }

std::string_view type_name(const SessionMessage& m) {
  return std::visit(Overloaded{
                        [](const msg::Join&) { return std::string_view("join"); },
                        [](const msg::Leave&) { return std::string_view("leave"); },
                        [](const msg::Pose&) { return std::string_view("pose"); },
                        [](const msg::Avatar&) { return std::string_view("avatar"); },
                        [](const msg::Voice&) { return std::string_view("voice"); },
                        [](const msg::StrokeStart&) { return std::string_view("stroke_start"); },
                        [](const msg::StrokePoint&) { return std::string_view("stroke_point"); },
                        [](const msg::StrokeEnd&) { return std::string_view("stroke_end"); },
                    },
                    m.body);
}

bool is_reliable(const SessionMessage& m) { return !std::holds_alternative<msg::Pose>(m.body); }

void validate(const SessionMessage& m) {
  std::visit(Overloaded{
                 [](const msg::Pose& p) {
                   require_finite(p.t, "pose t");
                   require_finite(p.heading_deg, "pose heading");
                   require_wire_geo(p.geo, "pose");
                 },
                 [](const msg::StrokeStart& s) {
                   require_wire_geo(s.anchor, "stroke_start");
                   if (s.brush.brush_type < 0 || s.brush.brush_type > 3) {
                     throw EncodeError("brush type must be in 0..3");
                   }
                   if (!(s.brush.size_m > 0.0) || !std::isfinite(s.brush.size_m)) {
                     throw EncodeError("brush size must be positive");
                   }
                 },
                 [](const msg::StrokePoint& s) {
                   if (!s.rel.allFinite()) throw EncodeError("stroke point is not finite");
                 },
                 [](const auto&) {},
             },
             m.body);
}

std::string encode_object(const SessionMessage& m) {
  validate(m);
  ojson j;
  j["v"] = kWireVersion;
  j["type"] = std::string(type_name(m));
  j["from"] = m.from.value;
  std::visit(Overloaded{
                 [&](const msg::Join& b) { j["platform"] = std::string(to_string(b.platform)); },
                 [](const msg::Leave&) {},
                 [&](const msg::Pose& b) {
                   j["t"] = b.t;
                   j["lat"] = b.geo.lat_deg;
                   j["lon"] = b.geo.lon_deg;
                   j["hdg"] = b.heading_deg;
                 },
                 [&](const msg::Avatar& b) { j["state"] = std::string(to_string(b.state)); },
                 [&](const msg::Voice& b) { j["mode"] = std::string(to_string(b.mode)); },
                 [&](const msg::StrokeStart& b) {
                   j["sid"] = b.stroke_id;
                   j["lat"] = b.anchor.lat_deg;
                   j["lon"] = b.anchor.lon_deg;
                   ojson brush;
                   brush["kind"] = b.brush.brush_type;
                   brush["size"] = b.brush.size_m;
                   brush["rgba"] = b.brush.rgba;
                   j["brush"] = std::move(brush);
                 },
                 [&](const msg::StrokePoint& b) {
                   j["sid"] = b.stroke_id;
                   j["dx"] = b.rel.x();
                   j["dy"] = b.rel.y();
                   j["dz"] = b.rel.z();
                 },
                 [&](const msg::StrokeEnd& b) { j["sid"] = b.stroke_id; },
             },
             m.body);
  return j.dump();
}

std::string encode(const SessionMessage& m) { return encode_object(m) + '\n'; }

SessionMessage decode(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  ojson j = ojson::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) throw DecodeError("malformed JSON");
  if (!j.is_object()) throw DecodeError("message is not a JSON object");

  const ojson& v = field(j, "v");
  if (!v.is_number_integer() || v.get<std::int64_t>() != kWireVersion) {
    throw DecodeError("unsupported protocol version " + v.dump());
  }
  const std::string type = string_field(j, "type");
  SessionMessage m;
  m.from = ClientId{id_field(j, "from")};

  if (type == "join") {
    const std::string p = string_field(j, "platform");
    if (p != "ar" && p != "vr") throw DecodeError("unknown platform '" + p + "'");
    m.body = msg::Join{p == "ar" ? Platform::kAr : Platform::kVr};
  } else if (type == "leave") {
    m.body = msg::Leave{};
  } else if (type == "pose") {
    m.body = msg::Pose{number_field(j, "t"), geo_fields(j), number_field(j, "hdg")};
  } else if (type == "avatar") {
    const std::string s = string_field(j, "state");
    if (s != "idle" && s != "walking") throw DecodeError("unknown avatar state '" + s + "'");
    m.body = msg::Avatar{s == "idle" ? AvatarState::kIdle : AvatarState::kWalking};
  } else if (type == "voice") {
    const std::string s = string_field(j, "mode");
    if (s != "2d" && s != "3d") throw DecodeError("unknown voice mode '" + s + "'");
    m.body = msg::Voice{s == "2d" ? VoiceMode::k2d : VoiceMode::k3d};
  } else if (type == "stroke_start") {
    msg::StrokeStart b;
    b.stroke_id = id_field(j, "sid");
    b.anchor = geo_fields(j);
    const ojson& brush = field(j, "brush");
    if (!brush.is_object()) throw DecodeError("field 'brush' is not an object");
    const ojson& kind = field(brush, "kind");
    if (!kind.is_number_integer()) throw DecodeError("brush kind is not an integer");
    b.brush.brush_type = kind.get<int>();
    b.brush.size_m = number_field(brush, "size");
    const ojson& rgba = field(brush, "rgba");
    if (!rgba.is_array() || rgba.size() != 4) throw DecodeError("brush rgba must have 4 entries");
    for (std::size_t i = 0; i < 4; ++i) {
      if (!rgba[i].is_number_unsigned() || rgba[i].get<unsigned>() > 255) {
        throw DecodeError("brush rgba entries must be 0..255");
      }
      b.brush.rgba[i] = static_cast<std::uint8_t>(rgba[i].get<unsigned>());
    }
    m.body = b;
  } else if (type == "stroke_point") {
    m.body = msg::StrokePoint{id_field(j, "sid"),
                              {number_field(j, "dx"), number_field(j, "dy"), number_field(j, "dz")}};
  } else if (type == "stroke_end") {
    m.body = msg::StrokeEnd{id_field(j, "sid")};
  } else {
    throw DecodeError("unknown message type '" + type + "'");
  }

  try {
    validate(m);
  } catch (const EncodeError& e) {
    throw DecodeError(e.what());
  }
  return m;
}

SessionMessage make_pose_message(ClientId from, const CorrectedFix& fix, const MapOrigin& origin) {
  geo_to_local(origin, fix.geo);
  return {from, msg::Pose{fix.t, quantize(fix.geo, kWireDecimals), fix.heading_deg}};
}

SessionMessage make_pose_message(ClientId from, double t, const LocalPosition& virtual_position,
                                 double heading_deg, const MapOrigin& origin) {
  const GeoCoordinate geo = local_to_geo(origin, virtual_position);
  return {from, msg::Pose{t, quantize(geo, kWireDecimals), heading_deg}};
}

AvatarState avatar_state_from_speed(AvatarState current, double speed_mps) {
  if (!(speed_mps >= 0.0)) throw ArgumentError("speed must be non-negative");
  if (current == AvatarState::kIdle && speed_mps > kWalkStartMps) return AvatarState::kWalking;
  if (current == AvatarState::kWalking && speed_mps < kWalkStopMps) return AvatarState::kIdle;
  return current;
}

double photosphere_scale(double d_m, const PhotosphereParams& p) {
  if (!(d_m >= 0.0)) throw ArgumentError("distance must be non-negative");
  if (!(p.s_min > 0.0 && p.s_min <= p.s_max && p.d_range > 0.0)) {
    throw ArgumentError("photosphere params need 0 < s_min <= s_max and d_range > 0");
  }
  return p.s_max - (p.s_max - p.s_min) * std::min(1.0, d_m / p.d_range);
}

double voice_gain(VoiceMode mode, double d_m, const VoiceParams& p) {
  if (!(d_m >= 0.0)) throw ArgumentError("distance must be non-negative");
  if (!(p.ref_dist > 0.0 && p.ref_dist < p.max_dist)) {
    throw ArgumentError("voice params need 0 < ref_dist < max_dist");
  }
  if (mode == VoiceMode::k2d) return 1.0;
  if (d_m <= p.ref_dist) return 1.0;
  if (d_m >= p.max_dist) return 0.0;
  return p.ref_dist / d_m;
}

}  // namespace geocollab
