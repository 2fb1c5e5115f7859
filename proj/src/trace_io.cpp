#include "geocollab/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "geocollab/errors.hpp"

namespace geocollab {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view text, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ArgumentError("line " + std::to_string(line_no) + ": bad number '" + std::string(text) + "'");
  }
  return v;
}

// Rows of a CSV with the given header, each split into `columns` fields.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::string_view header) {
  const std::string text = read_text_file(path);
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  const std::size_t columns = split(header, ',').size();
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != header) {
        throw ArgumentError(path.string() + ": expected header '" + std::string(header) + "'");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != columns) {
      throw ArgumentError(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                          std::to_string(columns) + " columns");
    }
    std::vector<double> row;
    row.reserve(columns);
    for (std::string_view f : fields) row.push_back(parse_double(f, line_no));
    rows.push_back(std::move(row));
  }
  if (line_no == 0) throw ArgumentError(path.string() + ": empty file");
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void write_gps_csv(const std::filesystem::path& path, std::span<const GpsFix> fixes) {
  std::string s = "t,lat,lon\n";
  for (const GpsFix& f : fixes) {
    s += format_double(f.t) + ',' + format_double(f.geo.lat_deg) + ',' +
         format_double(f.geo.lon_deg) + '\n';
  }
  write_text_file(path, s);
}

void write_slam_csv(const std::filesystem::path& path, std::span<const SlamPose> poses) {
  std::string s = "t,x,y,z,yaw_deg\n";
  for (const SlamPose& p : poses) {
    s += format_double(p.t) + ',' + format_double(p.x_m) + ',' + format_double(p.y_m) + ',' +
         format_double(p.z_m) + ',' + format_double(p.yaw_deg) + '\n';
  }
  write_text_file(path, s);
}

void write_truth_csv(const std::filesystem::path& path, std::span<const TruthSample> truth) {
  std::string s = "t,lat,lon,hdg\n";
  for (const TruthSample& p : truth) {
    s += format_double(p.t) + ',' + format_double(p.geo.lat_deg) + ',' +
         format_double(p.geo.lon_deg) + ',' + format_double(p.heading_deg) + '\n';
  }
  write_text_file(path, s);
}

void write_corrected_csv(const std::filesystem::path& path, std::span<const CorrectedFix> fixes) {
  std::string s = "t,lat,lon,hdg\n";
  for (const CorrectedFix& f : fixes) {
    s += format_double(f.t) + ',' + format_double(f.geo.lat_deg) + ',' +
         format_double(f.geo.lon_deg) + ',' + format_double(f.heading_deg) + '\n';
  }
  write_text_file(path, s);
}

std::vector<GpsFix> read_gps_csv(const std::filesystem::path& path) {
  std::vector<GpsFix> out;
  for (const auto& row : read_csv(path, "t,lat,lon")) {
    try {
      out.push_back(GpsFix{row[0], GeoCoordinate(row[1], row[2])});
    } catch (const DomainError& e) {
      throw ArgumentError(path.string() + ": row " + std::to_string(out.size() + 1) + ": " + e.what());
    }
  }
  return out;
}

std::vector<SlamPose> read_slam_csv(const std::filesystem::path& path) {
  std::vector<SlamPose> out;
  for (const auto& row : read_csv(path, "t,x,y,z,yaw_deg")) {
    out.push_back(SlamPose{row[0], row[1], row[2], row[3], row[4]});
  }
  return out;
}

}  // namespace geocollab
