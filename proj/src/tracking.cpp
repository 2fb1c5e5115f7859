#include "geocollab/tracking.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

#include "geocollab/errors.hpp"

namespace geocollab {

LocalPosition slam_delta(const SlamPose& ref, const SlamPose& p) {
  return {p.x_m - ref.x_m, p.z_m - ref.z_m, p.y_m - ref.y_m};
}

LocalPosition apply_alignment(const Alignment& a, const LocalPosition& delta) {
  const Eigen::Rotation2Dd yaw(a.rotation_deg * std::numbers::pi / 180.0);
  const Eigen::Vector2d ground = yaw * delta.head<2>() + a.translation;
  return {ground.x(), ground.y(), delta.z()};
}

Corrector Corrector::init(std::span<const GpsFix> gps_fixes, const SlamPose& slam_ref,
                          const Alignment& alignment, AnchorStrategy strategy) {
  if (gps_fixes.empty()) throw ArgumentError("init_corrector needs at least one GPS fix");

  GeoCoordinate anchor = gps_fixes.front().geo;
  if (strategy == AnchorStrategy::kAverage) {
    double lat = 0.0, lon = 0.0;
    for (const GpsFix& f : gps_fixes) {
      lat += f.geo.lat_deg;
      lon += f.geo.lon_deg;
    }
    const auto n = static_cast<double>(gps_fixes.size());
    anchor = GeoCoordinate(lat / n, lon / n);
  }

  Corrector c;
  c.origin_ = MapOrigin(anchor);
  c.slam_ref_ = slam_ref;
  c.alignment_ = Alignment(alignment.translation, alignment.rotation_deg);
  c.strategy_ = strategy;
  return c;
}

LocalPosition Corrector::local_at(const SlamPose& p) const {
  const Alignment shifted(alignment_.translation - anchor_translation_, alignment_.rotation_deg);
  const LocalPosition aligned = apply_alignment(shifted, slam_delta(slam_ref_, p));
  LocalPosition out = anchor_local_ + aligned;
  out.z() = 0.0;
  return out;
}

CorrectedFix Corrector::correct(const SlamPose& p) const {
  if (p.t < slam_ref_.t) {
    throw OrderingError("pose at t=" + std::to_string(p.t) +
                            " precedes the corrector reference pose",
                        0);
  }
  return {p.t, local_to_geo(origin_, local_at(p)),
          normalize_deg(p.yaw_deg + alignment_.rotation_deg)};
}

std::vector<CorrectedFix> Corrector::correct_trace(std::span<const SlamPose> stream) const {
  std::vector<CorrectedFix> out;
  out.reserve(stream.size());
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (i > 0 && !(stream[i].t > stream[i - 1].t)) {
      throw OrderingError("non-increasing timestamp at index " + std::to_string(i), i);
    }
    if (stream[i].t < slam_ref_.t) {
      throw OrderingError("pose at index " + std::to_string(i) +
                              " precedes the corrector reference pose",
                          i);
    }
    out.push_back(correct(stream[i]));
  }
  return out;
}

Corrector Corrector::realign(const Alignment& new_alignment, const SlamPose& at) const {
  if (at.t < slam_ref_.t) {
    throw OrderingError("realign pose precedes the corrector reference pose", 0);
  }
  Corrector next = *this;
  next.anchor_local_ = local_at(at);
  next.anchor_translation_ = alignment_.translation;
  next.slam_ref_ = at;
  next.alignment_ = Alignment(new_alignment.translation, new_alignment.rotation_deg);
  return next;
}

}  // namespace geocollab
