#pragma once

#include <Eigen/Core>

namespace geocollab {

/// Mean Earth radius of the spherical model (meters).
inline constexpr double kEarthRadiusM = 6371000.0;

/// Largest |lat - origin.lat| or |lon - origin.lon| accepted by geo_to_local.
inline constexpr double kEnvelopeDeg = 0.05;
/// Largest |east| or |north| accepted by local_to_geo.
inline constexpr double kEnvelopeM = 5000.0;

/// Geodetic latitude/longitude in degrees, stored at full precision.
struct GeoCoordinate {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  GeoCoordinate() = default;
  /// Throws DomainError unless lat in [-90, 90] and lon in [-180, 180).
  GeoCoordinate(double lat, double lon);

  friend bool operator==(const GeoCoordinate&, const GeoCoordinate&) = default;
};

/// East, north, up in meters relative to a MapOrigin. Up is carried but
/// always zero for ground-level users.
using LocalPosition = Eigen::Vector3d;

struct MetersPerDegree {
  double lat = 0.0;
  double lon = 0.0;
};

MetersPerDegree meters_per_degree(double lat_deg);

/// Anchor of a flat local frame. Scale factors are frozen at the origin
/// latitude so the frame is rigid and exactly invertible.
class MapOrigin {
 public:
  MapOrigin() : MapOrigin(GeoCoordinate{}) {}
  explicit MapOrigin(const GeoCoordinate& origin);

  const GeoCoordinate& origin() const { return origin_; }
  double meters_per_deg_lat() const { return scale_.lat; }
  double meters_per_deg_lon() const { return scale_.lon; }

 private:
  GeoCoordinate origin_;
  MetersPerDegree scale_;
};

LocalPosition geo_to_local(const MapOrigin& origin, const GeoCoordinate& g);
GeoCoordinate local_to_geo(const MapOrigin& origin, const LocalPosition& p);

/// Rounds each component half-away-from-zero in decimal, i.e. on the
/// shortest decimal representation of the double, so 1.000005 -> 1.00001.
GeoCoordinate quantize(const GeoCoordinate& g, int decimals);
double round_decimal(double value, int decimals);
/// True when the shortest decimal form of `value` has at most `decimals`
/// fractional digits.
bool has_at_most_decimals(double value, int decimals);

/// Ground distance (m) between g and quantize(g, decimals).
double quantization_displacement(const GeoCoordinate& g, int decimals);

/// Worst-case ground distance caused by rounding to `decimals` at lat_deg.
double max_quantization_error(double lat_deg, int decimals);

/// Flat-model ground distance, scaled at the mean latitude of a and b.
double ground_distance(const GeoCoordinate& a, const GeoCoordinate& b);

/// (east, north) meters from a to b, scaled at their mean latitude.
Eigen::Vector2d ground_offset(const GeoCoordinate& a, const GeoCoordinate& b);

/// Wraps an angle in degrees into [-180, 180).
double normalize_deg(double deg);

}  // namespace geocollab
