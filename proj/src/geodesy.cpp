#include "geocollab/geodesy.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "geocollab/errors.hpp"

namespace geocollab {

namespace {

constexpr int kMaxDecimals = 9;

void check_decimals(int decimals) {
  if (decimals < 0 || decimals > kMaxDecimals) {
    throw ArgumentError("decimals must be in [0, 9], got " +
                        std::to_string(decimals));
  }
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

GeoCoordinate::GeoCoordinate(double lat, double lon) : lat_deg(lat), lon_deg(lon) {
  if (!(lat >= -90.0 && lat <= 90.0)) {
    throw DomainError("latitude out of range: " + std::to_string(lat));
  }
  if (!(lon >= -180.0 && lon < 180.0)) {
    throw DomainError("longitude out of range: " + std::to_string(lon));
  }
}

MetersPerDegree meters_per_degree(double lat_deg) {
  if (!(lat_deg >= -90.0 && lat_deg <= 90.0)) {
    throw DomainError("latitude out of range: " + std::to_string(lat_deg));
  }
  const double per_lat = std::numbers::pi * kEarthRadiusM / 180.0;
  return {per_lat, per_lat * std::cos(deg_to_rad(lat_deg))};
}

MapOrigin::MapOrigin(const GeoCoordinate& origin)
    : origin_(origin), scale_(meters_per_degree(origin.lat_deg)) {}

LocalPosition geo_to_local(const MapOrigin& origin, const GeoCoordinate& g) {
  const double dlat = g.lat_deg - origin.origin().lat_deg;
  const double dlon = g.lon_deg - origin.origin().lon_deg;
  if (std::abs(dlat) >= kEnvelopeDeg || std::abs(dlon) >= kEnvelopeDeg) {
    throw RangeError("coordinate outside the 0.05 deg envelope of the map origin");
  }
  return {dlon * origin.meters_per_deg_lon(), dlat * origin.meters_per_deg_lat(), 0.0};
}

GeoCoordinate local_to_geo(const MapOrigin& origin, const LocalPosition& p) {
  if (!p.allFinite()) throw RangeError("non-finite local position");
  if (std::abs(p.x()) >= kEnvelopeM || std::abs(p.y()) >= kEnvelopeM) {
    throw RangeError("local position outside the 5 km envelope of the map origin");
  }
  return {origin.origin().lat_deg + p.y() / origin.meters_per_deg_lat(),
          origin.origin().lon_deg + p.x() / origin.meters_per_deg_lon()};
}

double round_decimal(double value, int decimals) {
  check_decimals(decimals);
  if (!std::isfinite(value)) return value;

  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
  std::string text(buf, res.ptr);

  const bool negative = !text.empty() && text.front() == '-';
  if (negative) text.erase(0, 1);
  const auto dot = text.find('.');
  if (dot == std::string::npos || text.size() - dot - 1 <= static_cast<std::size_t>(decimals)) {
    return value;
  }

  std::string digits = text.substr(0, dot) + text.substr(dot + 1, decimals);
  const bool round_up = text[dot + 1 + decimals] >= '5';
  if (round_up) {
    int i = static_cast<int>(digits.size()) - 1;
    for (; i >= 0; --i) {
      if (digits[i] == '9') {
        digits[i] = '0';
      } else {
        ++digits[i];
        break;
      }
    }
    if (i < 0) digits.insert(digits.begin(), '1');
  }
  const std::size_t int_len = digits.size() - decimals;
  std::string rounded = (negative ? "-" : "") + digits.substr(0, int_len);
  if (decimals > 0) rounded += "." + digits.substr(int_len);

  double out = 0.0;
  std::from_chars(rounded.data(), rounded.data() + rounded.size(), out);
  return out;
}

bool has_at_most_decimals(double value, int decimals) {
  return std::isfinite(value) && round_decimal(value, decimals) == value;
}

GeoCoordinate quantize(const GeoCoordinate& g, int decimals) {
  GeoCoordinate q;
  q.lat_deg = round_decimal(g.lat_deg, decimals);
  q.lon_deg = round_decimal(g.lon_deg, decimals);
  if (q.lon_deg >= 180.0) q.lon_deg -= 360.0;
  return q;
}

double quantization_displacement(const GeoCoordinate& g, int decimals) {
  const GeoCoordinate q = quantize(g, decimals);
  const MetersPerDegree scale = meters_per_degree(g.lat_deg);
  double dlon = q.lon_deg - g.lon_deg;
  if (dlon < -180.0) dlon += 360.0;
  return std::hypot((q.lat_deg - g.lat_deg) * scale.lat, dlon * scale.lon);
}

double max_quantization_error(double lat_deg, int decimals) {
  check_decimals(decimals);
  const double half_step = 0.5 * std::pow(10.0, -decimals);
  const MetersPerDegree scale = meters_per_degree(lat_deg);
  return std::hypot(half_step * scale.lat, half_step * scale.lon);
}

Eigen::Vector2d ground_offset(const GeoCoordinate& a, const GeoCoordinate& b) {
  const MetersPerDegree scale = meters_per_degree(0.5 * (a.lat_deg + b.lat_deg));
  return {(b.lon_deg - a.lon_deg) * scale.lon, (b.lat_deg - a.lat_deg) * scale.lat};
}

double ground_distance(const GeoCoordinate& a, const GeoCoordinate& b) {
  return ground_offset(a, b).norm();
}

double normalize_deg(double deg) {
  if (deg >= -180.0 && deg < 180.0) return deg;
  double wrapped = std::fmod(deg + 180.0, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  return wrapped - 180.0;
}

}  // namespace geocollab
