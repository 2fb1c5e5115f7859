#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "geocollab/evalharness.hpp"
#include "geocollab/tracking.hpp"

namespace geocollab {

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// CSV traces: comma separated, '.' decimals, LF line endings, one header row.
void write_gps_csv(const std::filesystem::path& path, std::span<const GpsFix> fixes);
void write_slam_csv(const std::filesystem::path& path, std::span<const SlamPose> poses);
void write_truth_csv(const std::filesystem::path& path, std::span<const TruthSample> truth);
void write_corrected_csv(const std::filesystem::path& path, std::span<const CorrectedFix> fixes);

/// Header `t,lat,lon`. Throws ArgumentError naming the line on bad input.
std::vector<GpsFix> read_gps_csv(const std::filesystem::path& path);
/// Header `t,x,y,z,yaw_deg`.
std::vector<SlamPose> read_slam_csv(const std::filesystem::path& path);

}  // namespace geocollab
