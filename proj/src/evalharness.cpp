#include "geocollab/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <json.hpp>

#include "geocollab/errors.hpp"
#include "geocollab/trace_io.hpp"

namespace geocollab {

namespace {

constexpr double kTimeEps = 1e-9;

double heading_of(const Eigen::Vector2d& v) {
  return std::atan2(v.y(), v.x()) * 180.0 / std::numbers::pi;
}

// Independent generator streams from one user seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double gaussian(std::mt19937_64& rng, double sigma) {
  if (sigma <= 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

}  // namespace

std::vector<TruthSample> gen_ground_truth(const PathSpec& spec) {
  if (spec.corners.size() < 3) throw ArgumentError("a closed path needs at least 3 corners");
  if (!(spec.speed_mps > 0.0)) throw ArgumentError("path speed must be positive");
  if (!(spec.sample_dt_s > 0.0)) throw ArgumentError("path sample interval must be positive");
  if (!(spec.dwell_s >= 0.0)) throw ArgumentError("path dwell must be non-negative");

  const MapOrigin origin(spec.corners.front());
  struct Segment {
    Eigen::Vector2d from;
    Eigen::Vector2d dir;
    double length;
    double start_s;
    double heading;
  };
  std::vector<Segment> segments;
  double perimeter = 0.0;
  const std::size_t n = spec.corners.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d a = geo_to_local(origin, spec.corners[i]).head<2>();
    const Eigen::Vector2d b = geo_to_local(origin, spec.corners[(i + 1) % n]).head<2>();
    const double len = (b - a).norm();
    if (len <= 0.0) continue;
    segments.push_back({a, (b - a) / len, len, perimeter, heading_of(b - a)});
    perimeter += len;
  }
  if (segments.empty() || perimeter < kMinSegmentM) {
    throw ArgumentError("degenerate path: zero perimeter");
  }

  const double duration = spec.dwell_s + perimeter / spec.speed_mps;
  std::vector<TruthSample> out;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * spec.sample_dt_s;
    if (t >= duration - kTimeEps) break;
    const double s = std::max(0.0, (t - spec.dwell_s) * spec.speed_mps);
    auto seg = std::upper_bound(segments.begin(), segments.end(), s,
                                [](double v, const Segment& sg) { return v < sg.start_s; });
    const Segment& cur = *std::prev(seg);
    const Eigen::Vector2d p = cur.from + cur.dir * std::min(s - cur.start_s, cur.length);
    const GeoCoordinate geo = k == 0 ? spec.corners.front() : local_to_geo(origin, {p.x(), p.y(), 0.0});
    out.push_back({t, geo, cur.heading});
  }
  out.push_back({duration, spec.corners.front(), segments.back().heading});
  return out;
}

std::vector<GpsFix> synth_gps(std::span<const TruthSample> truth, const GpsNoiseParams& params,
                              std::uint64_t seed) {
  if (params.white_sigma_m < 0.0 || params.bias_walk_sigma_m < 0.0 || params.initial_bias_m < 0.0) {
    throw ArgumentError("GPS noise parameters must be non-negative");
  }
  std::mt19937_64 rng(seed);
  Eigen::Vector2d bias = Eigen::Vector2d::Zero();
  if (params.initial_bias_m > 0.0) {
    const double angle = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    const double mag = std::uniform_real_distribution<double>(0.0, params.initial_bias_m)(rng);
    bias = mag * Eigen::Vector2d(std::cos(angle), std::sin(angle));
  }

  std::vector<GpsFix> out;
  out.reserve(truth.size());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (k > 0) {
      bias.x() += gaussian(rng, params.bias_walk_sigma_m);
      bias.y() += gaussian(rng, params.bias_walk_sigma_m);
    }
    const double east = bias.x() + gaussian(rng, params.white_sigma_m);
    const double north = bias.y() + gaussian(rng, params.white_sigma_m);
    const MetersPerDegree scale = meters_per_degree(truth[k].geo.lat_deg);
    GeoCoordinate g = truth[k].geo;
    g.lat_deg += north / scale.lat;
    g.lon_deg += east / scale.lon;
    out.push_back({truth[k].t, g});
  }
  return out;
}

std::vector<SlamPose> synth_slam(std::span<const TruthSample> truth, const SlamNoiseParams& params,
                                 std::uint64_t seed) {
  if (!(params.scale_error > -1.0)) throw ArgumentError("SLAM scale error must be > -1");
  if (params.walk_sigma_m_per_sqrt_m < 0.0) throw ArgumentError("SLAM walk sigma must be >= 0");
  std::vector<SlamPose> out;
  if (truth.empty()) return out;
  out.reserve(truth.size());

  std::mt19937_64 rng(seed);
  const MapOrigin frame(truth.front().geo);
  const Eigen::Rotation2Dd yaw(params.yaw_bias_deg * std::numbers::pi / 180.0);
  Eigen::Vector2d walk = Eigen::Vector2d::Zero();
  Eigen::Vector2d prev = Eigen::Vector2d::Zero();
  for (const TruthSample& s : truth) {
    const Eigen::Vector2d d = geo_to_local(frame, s.geo).head<2>();
    const double step = (d - prev).norm();
    prev = d;
    // Isotropic 2D walk: each axis takes half the variance.
    const double sigma = params.walk_sigma_m_per_sqrt_m * std::sqrt(step / 2.0);
    walk.x() += gaussian(rng, sigma);
    walk.y() += gaussian(rng, sigma);
    const Eigen::Vector2d p = (1.0 + params.scale_error) * (yaw * d) + walk;
    out.push_back({s.t, p.x(), 0.0, p.y(), normalize_deg(s.heading_deg + params.yaw_bias_deg)});
  }
  return out;
}

TraceMetrics compute_metrics(std::span<const GpsFix> trace, std::span<const TruthSample> truth,
                             bool closed) {
  if (trace.size() != truth.size()) {
    throw ArgumentError("trace and truth lengths differ (" + std::to_string(trace.size()) + " vs " +
                        std::to_string(truth.size()) + ")");
  }
  TraceMetrics m;
  if (trace.empty()) return m;

  double sq = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double d = ground_distance(trace[i].geo, truth[i].geo);
    sq += d * d;
  }
  m.rmse_m = std::sqrt(sq / static_cast<double>(trace.size()));
  if (closed) m.loop_closure_m = ground_distance(trace.front().geo, trace.back().geo);

  double turn_sum = 0.0, length_sum = 0.0;
  std::size_t turns = 0, segments = 0;
  double prev_heading = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const Eigen::Vector2d seg = ground_offset(trace[i - 1].geo, trace[i].geo);
    const double len = seg.norm();
    if (len < kMinSegmentM) continue;
    const double h = heading_of(seg);
    if (segments > 0) {
      turn_sum += std::abs(normalize_deg(h - prev_heading));
      ++turns;
    }
    prev_heading = h;
    length_sum += len;
    ++segments;
  }
  if (turns > 0) {
    m.smoothness_deg_per_m = (turn_sum / static_cast<double>(turns)) /
                             (length_sum / static_cast<double>(segments));
  }
  return m;
}

std::vector<std::size_t> downsample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  if (n <= k) return all;
  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::mt19937_64 rng(seed);
  std::sample(all.begin(), all.end(), std::back_inserter(picked), k, rng);
  return picked;
}

Comparison run_comparison(const PathSpec& spec, const GpsNoiseParams& gps,
                          const SlamNoiseParams& slam, const CorrectorConfig& corrector,
                          std::uint64_t seed) {
  Comparison c;
  c.truth = gen_ground_truth(spec);
  c.raw = synth_gps(c.truth, gps, derive_seed(seed, 0));
  c.slam = synth_slam(c.truth, slam, derive_seed(seed, 1));

  std::size_t anchor_fixes = 1;
  if (corrector.anchor == AnchorStrategy::kAverage) {
    anchor_fixes = std::clamp<std::size_t>(corrector.avg_n, 1, c.raw.size());
  }
  const Corrector corr =
      Corrector::init(std::span<const GpsFix>(c.raw).first(anchor_fixes), c.slam.front(),
                      Alignment::identity(), corrector.anchor);
  for (const CorrectedFix& f : corr.correct_trace(c.slam)) c.corrected.push_back({f.t, f.geo});

  c.raw_metrics = compute_metrics(c.raw, c.truth, true);
  c.corrected_metrics = compute_metrics(c.corrected, c.truth, true);
  c.raw_plot = downsample_indices(c.raw.size(), kPlotPoints, derive_seed(seed, 2));
  c.corrected_plot = downsample_indices(c.corrected.size(), kPlotPoints, derive_seed(seed, 3));
  return c;
}

void export_csv(const Comparison& c, const std::filesystem::path& path) {
  std::string s = "t,truth_lat,truth_lon,raw_lat,raw_lon,corr_lat,corr_lon\n";
  const std::size_t n = std::min({c.truth.size(), c.raw.size(), c.corrected.size()});
  for (std::size_t i = 0; i < n; ++i) {
    s += format_double(c.truth[i].t) + ',' + format_double(c.truth[i].geo.lat_deg) + ',' +
         format_double(c.truth[i].geo.lon_deg) + ',' + format_double(c.raw[i].geo.lat_deg) + ',' +
         format_double(c.raw[i].geo.lon_deg) + ',' + format_double(c.corrected[i].geo.lat_deg) +
         ',' + format_double(c.corrected[i].geo.lon_deg) + '\n';
  }
  write_text_file(path, s);
}

void export_metrics_csv(const Comparison& c, const std::filesystem::path& path) {
  auto row = [](const char* name, const TraceMetrics& m) {
    return std::string(name) + ',' + format_double(m.rmse_m) + ',' +
           format_double(m.loop_closure_m) + ',' + format_double(m.smoothness_deg_per_m) + '\n';
  };
  write_text_file(path, "trace,rmse_m,loop_closure_m,smoothness_deg_per_m\n" +
                            row("raw", c.raw_metrics) + row("corrected", c.corrected_metrics));
}

void export_svg(const Comparison& c, const std::filesystem::path& path) {
  constexpr double kWidth = 800.0;
  double lat_min = 90.0, lat_max = -90.0, lon_min = 180.0, lon_max = -180.0;
  auto extend = [&](const GeoCoordinate& g) {
    lat_min = std::min(lat_min, g.lat_deg);
    lat_max = std::max(lat_max, g.lat_deg);
    lon_min = std::min(lon_min, g.lon_deg);
    lon_max = std::max(lon_max, g.lon_deg);
  };
  for (const auto& s : c.truth) extend(s.geo);
  for (const auto& s : c.raw) extend(s.geo);
  for (const auto& s : c.corrected) extend(s.geo);
  if (lat_min > lat_max) lat_min = lat_max = lon_min = lon_max = 0.0;

  // 10% margin of the data span on every side.
  const double lat_pad = std::max(0.1 * (lat_max - lat_min), 1e-7);
  const double lon_pad = std::max(0.1 * (lon_max - lon_min), 1e-7);
  lat_min -= lat_pad;
  lat_max += lat_pad;
  lon_min -= lon_pad;
  lon_max += lon_pad;
  const double x_scale = std::cos(0.5 * (lat_min + lat_max) * std::numbers::pi / 180.0);
  const double span_x = (lon_max - lon_min) * x_scale;
  const double span_y = lat_max - lat_min;
  const double px_per_unit = kWidth / span_x;
  const double height = span_y * px_per_unit;

  char buf[128];
  auto point = [&](const GeoCoordinate& g) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f", (g.lon_deg - lon_min) * x_scale * px_per_unit,
                  (lat_max - g.lat_deg) * px_per_unit);
    return std::string(buf);
  };
  auto polyline = [&](const auto& samples, const char* id, const char* color) {
    std::string s = std::string("<polyline id=\"") + id + "\" fill=\"none\" stroke=\"" + color +
                    "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (i > 0) s += ' ';
      s += point(samples[i].geo);
    }
    return s + "\"/>\n";
  };
  auto markers = [&](const std::vector<GpsFix>& samples, const std::vector<std::size_t>& idx,
                     const char* id, const char* color) {
    std::string s = std::string("<g id=\"") + id + "\" fill=\"" + color + "\">\n";
    for (std::size_t i : idx) {
      const std::string p = point(samples[i].geo);
      const auto comma = p.find(',');
      s += "<circle cx=\"" + p.substr(0, comma) + "\" cy=\"" + p.substr(comma + 1) + "\" r=\"1.5\"/>\n";
    }
    return s + "</g>\n";
  };

  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.2f %.2f\">\n",
                kWidth, std::ceil(height), kWidth, height);
  std::string svg = buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += polyline(c.truth, "truth", "red");
  svg += polyline(c.raw, "raw", "blue");
  svg += polyline(c.corrected, "corrected", "orange");
  svg += markers(c.raw, c.raw_plot, "raw_samples", "blue");
  svg += markers(c.corrected, c.corrected_plot, "corrected_samples", "orange");
  svg += "</svg>\n";
  write_text_file(path, svg);
}

namespace {

using json = nlohmann::json;

double num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ArgumentError(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

}  // namespace

EvalScenario parse_eval_scenario(std::string_view json_text) {
  const json root = json::parse(json_text.begin(), json_text.end(), nullptr, false);
  if (root.is_discarded() || !root.is_object()) throw ArgumentError("scenario is not a JSON object");

  EvalScenario sc;
  if (!root.contains("path") || !root["path"].is_object()) throw ArgumentError("scenario needs 'path'");
  const json& path = root["path"];
  if (!path.contains("corners") || !path["corners"].is_array()) {
    throw ArgumentError("path needs a 'corners' array");
  }
  for (const json& c : path["corners"]) {
    double lat = 0.0, lon = 0.0;
    if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      lat = c[0].get<double>();
      lon = c[1].get<double>();
    } else if (c.is_object()) {
      lat = num(c, "lat", NAN);
      lon = num(c, "lon", NAN);
    } else {
      throw ArgumentError("corner must be [lat, lon] or {lat, lon}");
    }
    try {
      sc.path.corners.emplace_back(lat, lon);
    } catch (const DomainError& e) {
      throw ArgumentError(std::string("bad corner: ") + e.what());
    }
  }
  sc.path.speed_mps = num(path, "speed", sc.path.speed_mps);
  sc.path.sample_dt_s = num(path, "dt", sc.path.sample_dt_s);
  sc.path.dwell_s = num(path, "dwell", sc.path.dwell_s);

  if (root.contains("gps")) {
    const json& g = root["gps"];
    sc.gps.white_sigma_m = num(g, "white_sigma", 0.0);
    sc.gps.bias_walk_sigma_m = num(g, "bias_walk_sigma", 0.0);
    sc.gps.initial_bias_m = num(g, "initial_bias", 0.0);
  }
  if (root.contains("slam")) {
    const json& s = root["slam"];
    sc.slam.scale_error = num(s, "scale_error", 0.0);
    sc.slam.walk_sigma_m_per_sqrt_m = num(s, "walk_sigma", 0.0);
    sc.slam.yaw_bias_deg = num(s, "yaw_bias_deg", 0.0);
  }
  if (root.contains("corrector")) {
    const json& c = root["corrector"];
    const std::string anchor = c.value("anchor", std::string("first"));
    if (anchor == "first") {
      sc.corrector.anchor = AnchorStrategy::kFirstFix;
    } else if (anchor == "avg") {
      sc.corrector.anchor = AnchorStrategy::kAverage;
    } else {
      throw ArgumentError("corrector anchor must be \"first\" or \"avg\"");
    }
    const double n = num(c, "avg_n", 1.0);
    if (!(n >= 1.0) || n != std::floor(n)) throw ArgumentError("avg_n must be a positive integer");
    sc.corrector.avg_n = static_cast<std::size_t>(n);
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) throw ArgumentError("seed must be an unsigned integer");
    sc.seed = root["seed"].get<std::uint64_t>();
    sc.has_seed = true;
  }
  return sc;
}

EvalScenario load_eval_scenario(const std::filesystem::path& path) {
  return parse_eval_scenario(read_text_file(path));
}

}  // namespace geocollab
