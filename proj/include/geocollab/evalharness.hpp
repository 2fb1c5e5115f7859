#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "geocollab/geodesy.hpp"
#include "geocollab/tracking.hpp"

namespace geocollab {

/// Closed polygon walked at constant speed. The walker first stands still
/// at corners[0] for dwell_s seconds.
struct PathSpec {
  std::vector<GeoCoordinate> corners;
  double speed_mps = 1.4;
  double sample_dt_s = 1.0;
  double dwell_s = 0.0;
};

/// Heading is counter-clockwise from east, degrees.
struct TruthSample {
  double t = 0.0;
  GeoCoordinate geo;
  double heading_deg = 0.0;
};

struct GpsNoiseParams {
  double white_sigma_m = 0.0;
  double bias_walk_sigma_m = 0.0;  // per sample
  double initial_bias_m = 0.0;     // bound on the initial bias magnitude
};

struct SlamNoiseParams {
  double scale_error = 0.0;
  double walk_sigma_m_per_sqrt_m = 0.0;  // RMS 2D displacement after 1 m
  double yaw_bias_deg = 0.0;
};

struct TraceMetrics {
  double rmse_m = 0.0;
  double loop_closure_m = 0.0;
  double smoothness_deg_per_m = 0.0;
};

struct CorrectorConfig {
  AnchorStrategy anchor = AnchorStrategy::kFirstFix;
  std::size_t avg_n = 1;
};

std::vector<TruthSample> gen_ground_truth(const PathSpec& spec);

std::vector<GpsFix> synth_gps(std::span<const TruthSample> truth, const GpsNoiseParams& params,
                              std::uint64_t seed);

/// SLAM frame anchored at the first truth sample, rotated by yaw_bias,
/// scaled by (1 + scale_error) and perturbed by a random walk in traveled
/// distance.
std::vector<SlamPose> synth_slam(std::span<const TruthSample> truth, const SlamNoiseParams& params,
                                 std::uint64_t seed);

/// Segments shorter than this are skipped by the smoothness metric.
inline constexpr double kMinSegmentM = 0.01;

TraceMetrics compute_metrics(std::span<const GpsFix> trace, std::span<const TruthSample> truth,
                             bool closed);

/// Sorted indices of a seeded uniform sample of `k` out of `n` without
/// replacement; all indices when n <= k.
std::vector<std::size_t> downsample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

inline constexpr std::size_t kPlotPoints = 500;

struct Comparison {
  std::vector<TruthSample> truth;
  std::vector<GpsFix> raw;
  std::vector<SlamPose> slam;
  std::vector<GpsFix> corrected;
  TraceMetrics raw_metrics;
  TraceMetrics corrected_metrics;
  std::vector<std::size_t> raw_plot;
  std::vector<std::size_t> corrected_plot;
};

Comparison run_comparison(const PathSpec& spec, const GpsNoiseParams& gps,
                          const SlamNoiseParams& slam, const CorrectorConfig& corrector,
                          std::uint64_t seed);

/// Columns t,truth_lat,truth_lon,raw_lat,raw_lon,corr_lat,corr_lon.
void export_csv(const Comparison& c, const std::filesystem::path& path);
/// Columns trace,rmse_m,loop_closure_m,smoothness_deg_per_m.
void export_metrics_csv(const Comparison& c, const std::filesystem::path& path);
/// Truth, raw and corrected polylines plus the plot-sample markers.
void export_svg(const Comparison& c, const std::filesystem::path& path);

struct EvalScenario {
  PathSpec path;
  GpsNoiseParams gps;
  SlamNoiseParams slam;
  CorrectorConfig corrector;
  std::uint64_t seed = 42;
  bool has_seed = false;
};

/// {path:{corners:[[lat,lon],...],speed,dt,dwell}, gps:{white_sigma,
/// bias_walk_sigma,initial_bias}, slam:{scale_error,walk_sigma,yaw_bias_deg},
/// corrector:{anchor:"first"|"avg",avg_n}, seed}. Throws ArgumentError.
EvalScenario parse_eval_scenario(std::string_view json_text);
EvalScenario load_eval_scenario(const std::filesystem::path& path);

}  // namespace geocollab
