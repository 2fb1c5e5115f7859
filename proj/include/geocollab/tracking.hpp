#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "geocollab/geodesy.hpp"

namespace geocollab {

/// A pose reported by the device SLAM system. The device frame is y-up:
/// x maps to east', z to north' and y to up before alignment.
struct SlamPose {
  double t = 0.0;
  double x_m = 0.0;
  double y_m = 0.0;
  double z_m = 0.0;
  double yaw_deg = 0.0;

  friend bool operator==(const SlamPose&, const SlamPose&) = default;
};

/// Manual map alignment: yaw about up (counter-clockwise, degrees) followed
/// by an (east, north) translation in meters.
struct Alignment {
  Eigen::Vector2d translation = Eigen::Vector2d::Zero();
  double rotation_deg = 0.0;

  Alignment() = default;
  Alignment(const Eigen::Vector2d& t, double rotation)
      : translation(t), rotation_deg(normalize_deg(rotation)) {}

  static Alignment identity() { return {}; }

  friend bool operator==(const Alignment& a, const Alignment& b) {
    return a.translation == b.translation && a.rotation_deg == b.rotation_deg;
  }
};

enum class AnchorStrategy { kFirstFix, kAverage };

struct GpsFix {
  double t = 0.0;
  GeoCoordinate geo;
};

struct CorrectedFix {
  double t = 0.0;
  GeoCoordinate geo;
  double heading_deg = 0.0;
};

/// Map-frame displacement of `p` relative to `ref`, using the SLAM axis
/// convention (x -> east, z -> north, y -> up).
LocalPosition slam_delta(const SlamPose& ref, const SlamPose& p);

/// Rotates `delta` about up, then adds the translation. Up is unchanged.
LocalPosition apply_alignment(const Alignment& a, const LocalPosition& delta);

/// GPS-anchored dead reckoning over SLAM deltas. Immutable; realign returns
/// a new value.
class Corrector {
 public:
  static Corrector init(std::span<const GpsFix> gps_fixes, const SlamPose& slam_ref,
                        const Alignment& alignment,
                        AnchorStrategy strategy = AnchorStrategy::kFirstFix);

  CorrectedFix correct(const SlamPose& p) const;
  std::vector<CorrectedFix> correct_trace(std::span<const SlamPose> stream) const;

  /// Re-anchors at pose `at`: the new anchor is the fix produced at `at` by
  /// the current state, deltas are measured from `at`, and the new rotation
  /// applies to them. A translation change shifts output by the difference
  /// between new and old translation, so an unchanged alignment leaves the
  /// fix at `at` bit-identical.
  Corrector realign(const Alignment& new_alignment, const SlamPose& at) const;

  const MapOrigin& origin() const { return origin_; }
  const SlamPose& slam_ref() const { return slam_ref_; }
  const Alignment& alignment() const { return alignment_; }
  AnchorStrategy anchor_strategy() const { return strategy_; }

 private:
  Corrector() = default;

  LocalPosition local_at(const SlamPose& p) const;

  MapOrigin origin_;
  SlamPose slam_ref_;
  Alignment alignment_;
  AnchorStrategy strategy_ = AnchorStrategy::kFirstFix;
  // Map-frame position of slam_ref_ minus the translation in effect when it
  // was anchored. Zero until the first realign.
  LocalPosition anchor_local_ = LocalPosition::Zero();
  Eigen::Vector2d anchor_translation_ = Eigen::Vector2d::Zero();
};

}  // namespace geocollab
