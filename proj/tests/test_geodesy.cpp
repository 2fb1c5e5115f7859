#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "geocollab/errors.hpp"
#include "geocollab/geodesy.hpp"

using namespace geocollab;

namespace {

// High-precision reference values (40-digit arithmetic, spherical R = 6371 km).
constexpr double kMLat = 111194.92664455873;
constexpr double kMLon51522791 = 69185.84842197057;
constexpr double kDispWorked = 0.29824690721175133;
constexpr double kBound51522791 = 0.65480900523276035;
constexpr double kBoundEquator = 0.78626686663908198;
constexpr double kBoundPole = 0.55597463322279369;

const GeoCoordinate kUcl{51.52279, -0.13175};

}  // namespace

TEST(MetersPerDegree, Equator) {
  const auto m = meters_per_degree(0.0);
  EXPECT_NEAR(m.lat, 111194.93, 0.01);
  EXPECT_NEAR(m.lon, 111194.93, 0.01);
  EXPECT_NEAR(m.lat, kMLat, 1e-8);
}

TEST(MetersPerDegree, Pole) {
  const auto m = meters_per_degree(90.0);
  EXPECT_NEAR(m.lat, 111194.93, 0.01);
  EXPECT_NEAR(m.lon, 0.0, 1e-6);
}

TEST(MetersPerDegree, London) {
  const auto m = meters_per_degree(51.522791);
  EXPECT_NEAR(m.lon, 69189.0, 5.0);
  EXPECT_NEAR(m.lon, kMLon51522791, 1e-6);
}

TEST(MetersPerDegree, RejectsBadLatitude) {
  EXPECT_THROW(meters_per_degree(90.5), DomainError);
  EXPECT_THROW(meters_per_degree(-91.0), DomainError);
  EXPECT_THROW(meters_per_degree(std::nan("")), DomainError);
}

TEST(GeoCoordinate, Validation) {
  EXPECT_NO_THROW(GeoCoordinate(-90.0, -180.0));
  EXPECT_THROW(GeoCoordinate(0.0, 180.0), DomainError);
  EXPECT_THROW(GeoCoordinate(95.0, 0.0), DomainError);
}

TEST(GeoToLocal, Identity) {
  const MapOrigin o(kUcl);
  EXPECT_EQ(geo_to_local(o, kUcl), LocalPosition::Zero());
}

TEST(GeoToLocal, OneMeterNorth) {
  const MapOrigin o(kUcl);
  const LocalPosition p = geo_to_local(o, {51.52279 + 0.000008994, -0.13175});
  EXPECT_NEAR(p.y(), 1.0, 1e-3);
  EXPECT_NEAR(p.x(), 0.0, 1e-9);
  EXPECT_EQ(p.z(), 0.0);
}

TEST(GeoToLocal, EastAtEquator) {
  const MapOrigin o(GeoCoordinate{0.0, 0.0});
  EXPECT_NEAR(geo_to_local(o, {0.0, 0.00001}).x(), 1.11195, 1e-4);
}

TEST(GeoToLocal, EnvelopeExceeded) {
  const MapOrigin o(kUcl);
  EXPECT_THROW(geo_to_local(o, {51.52279 + 0.06, -0.13175}), RangeError);
  EXPECT_THROW(geo_to_local(o, {51.52279, -0.13175 - 0.06}), RangeError);
}

TEST(LocalToGeo, Identity) {
  const MapOrigin o(kUcl);
  EXPECT_EQ(local_to_geo(o, LocalPosition::Zero()), kUcl);
}

TEST(LocalToGeo, TenMetersEast) {
  const MapOrigin o(kUcl);
  const GeoCoordinate g = local_to_geo(o, {10.0, 0.0, 0.0});
  EXPECT_NEAR(g.lon_deg, -0.1316055, 1e-6);
  EXPECT_NEAR(g.lon_deg, -0.13160546177421411, 1e-12);
  EXPECT_DOUBLE_EQ(g.lat_deg, 51.52279);
}

TEST(LocalToGeo, EnvelopeExceeded) {
  const MapOrigin o(kUcl);
  EXPECT_THROW(local_to_geo(o, {5001.0, 0.0, 0.0}), RangeError);
  EXPECT_THROW(local_to_geo(o, {0.0, -5001.0, 0.0}), RangeError);
}

TEST(Transform, RoundTripProperty) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lat(-70.0, 70.0);
  std::uniform_real_distribution<double> lon(-179.0, 179.0);
  std::uniform_real_distribution<double> off(-0.02, 0.02);
  for (int i = 0; i < 1000; ++i) {
    const MapOrigin o(GeoCoordinate{lat(rng), lon(rng)});
    const GeoCoordinate g{o.origin().lat_deg + off(rng), o.origin().lon_deg + off(rng)};
    const GeoCoordinate back = local_to_geo(o, geo_to_local(o, g));
    ASSERT_NEAR(back.lat_deg, g.lat_deg, 1e-9);
    ASSERT_NEAR(back.lon_deg, g.lon_deg, 1e-9);
  }
}

TEST(Quantize, WorkedExample) {
  const GeoCoordinate q = quantize({51.522791, -0.131754}, 5);
  EXPECT_EQ(q.lat_deg, 51.52279);
  EXPECT_EQ(q.lon_deg, -0.13175);
}

TEST(Quantize, TiesAwayFromZero) {
  const GeoCoordinate q = quantize({1.000005, -1.000005}, 5);
  EXPECT_EQ(q.lat_deg, 1.00001);
  EXPECT_EQ(q.lon_deg, -1.00001);
  EXPECT_EQ(round_decimal(0.5, 0), 1.0);
  EXPECT_EQ(round_decimal(-2.5, 0), -3.0);
  EXPECT_EQ(round_decimal(0.125, 2), 0.13);
}

TEST(Quantize, Idempotent) {
  EXPECT_EQ(quantize(kUcl, 5), kUcl);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-90.0, 90.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 2000; ++i) {
    const double lo = lon(rng);
    const GeoCoordinate g{lat(rng), lo >= 180.0 ? -180.0 : lo};
    const GeoCoordinate q = quantize(g, 5);
    ASSERT_EQ(quantize(q, 5), q);
    ASSERT_TRUE(has_at_most_decimals(q.lat_deg, 5));
    ASSERT_TRUE(has_at_most_decimals(q.lon_deg, 5));
    ASSERT_LE(std::abs(q.lat_deg - g.lat_deg), 0.5e-5 + 1e-12);
  }
}

TEST(Quantize, Monotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v(-89.0, 89.0);
  for (int i = 0; i < 2000; ++i) {
    double a = v(rng), b = v(rng);
    if (a > b) std::swap(a, b);
    ASSERT_LE(round_decimal(a, 5), round_decimal(b, 5));
  }
}

TEST(Quantize, LongitudeWrapsToRange) {
  const GeoCoordinate q = quantize({0.0, 179.999999}, 5);
  EXPECT_EQ(q.lon_deg, -180.0);
}

TEST(Quantize, RejectsBadDecimals) {
  EXPECT_THROW(quantize(kUcl, -1), ArgumentError);
  EXPECT_THROW(quantize(kUcl, 10), ArgumentError);
}

TEST(Decimals, Detection) {
  EXPECT_TRUE(has_at_most_decimals(51.52279, 5));
  EXPECT_FALSE(has_at_most_decimals(51.522791, 5));
  EXPECT_TRUE(has_at_most_decimals(-0.1, 1));
  EXPECT_TRUE(has_at_most_decimals(3.0, 0));
}

TEST(Displacement, WorkedExample) {
  const double d = quantization_displacement({51.522791, -0.131754}, 5);
  EXPECT_NEAR(d, 0.29, 0.02);
  EXPECT_NEAR(d, kDispWorked, 1e-6);
}

TEST(Displacement, AlreadyQuantized) {
  EXPECT_EQ(quantization_displacement(kUcl, 5), 0.0);
}

TEST(Displacement, NearEquator) {
  EXPECT_NEAR(quantization_displacement({0.0000049, 0.0}, 5), 0.545, 1e-3);
}

TEST(MaxQuantizationError, Examples) {
  EXPECT_NEAR(max_quantization_error(51.522791, 5), 0.655, 0.005);
  EXPECT_NEAR(max_quantization_error(51.522791, 5), kBound51522791, 1e-9);
  EXPECT_NEAR(max_quantization_error(0.0, 5), kBoundEquator, 1e-9);
  EXPECT_NEAR(max_quantization_error(90.0, 5), kBoundPole, 1e-9);
  EXPECT_NEAR(max_quantization_error(51.52, 6), 0.0655, 1e-4);
}

TEST(MaxQuantizationError, BoundsDisplacementProperty) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lat(-80.0, 80.0);
  std::uniform_real_distribution<double> lon(-179.9, 179.9);
  for (int dec = 3; dec <= 7; ++dec) {
    for (int i = 0; i < 500; ++i) {
      const GeoCoordinate g{lat(rng), lon(rng)};
      ASSERT_LE(quantization_displacement(g, dec), max_quantization_error(g.lat_deg, dec) * (1 + 1e-9));
    }
  }
}

TEST(NormalizeDeg, Wraps) {
  EXPECT_EQ(normalize_deg(0.1), 0.1);
  EXPECT_EQ(normalize_deg(180.0), -180.0);
  EXPECT_EQ(normalize_deg(-180.0), -180.0);
  EXPECT_DOUBLE_EQ(normalize_deg(450.0), 90.0);
  EXPECT_DOUBLE_EQ(normalize_deg(-190.0), 170.0);
}

TEST(GroundDistance, MatchesLocalFrame) {
  const GeoCoordinate a = kUcl;
  const GeoCoordinate b = local_to_geo(MapOrigin(a), {30.0, 40.0, 0.0});
  EXPECT_NEAR(ground_distance(a, b), 50.0, 1e-3);
}

TEST(Transform, ScaleConsistencyProperty) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> off(-0.01, 0.01);
  const MapOrigin o(kUcl);
  for (int i = 0; i < 500; ++i) {
    const GeoCoordinate a{kUcl.lat_deg + off(rng), kUcl.lon_deg + off(rng)};
    const GeoCoordinate b{kUcl.lat_deg + off(rng), kUcl.lon_deg + off(rng)};
    const LocalPosition d = geo_to_local(o, b) - geo_to_local(o, a);
    ASSERT_NEAR(d.x(), (b.lon_deg - a.lon_deg) * o.meters_per_deg_lon(), 1e-6);
    ASSERT_NEAR(d.y(), (b.lat_deg - a.lat_deg) * o.meters_per_deg_lat(), 1e-6);
  }
}

TEST(MetersPerDegree, LongitudeFactorDecreasesWithAbsLatitude) {
  double prev = meters_per_degree(0.0).lon;
  for (int i = 1; i <= 900; ++i) {
    const double lat = i * 0.1;
    const double m = meters_per_degree(lat).lon;
    ASSERT_LT(m, prev);
    ASSERT_EQ(m, meters_per_degree(-lat).lon);
    prev = m;
  }
}
