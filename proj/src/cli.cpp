#include "geocollab/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "geocollab/errors.hpp"
#include "geocollab/evalharness.hpp"
#include "geocollab/geodesy.hpp"
#include "geocollab/protocol.hpp"
#include "geocollab/scenario.hpp"
#include "geocollab/trace_io.hpp"
#include "geocollab/tracking.hpp"

namespace geocollab {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 42;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  fs::path out_dir = ".";
};

std::uint64_t effective_seed(const Globals& g, bool scenario_has_seed, std::uint64_t scenario_seed) {
  if (g.seed_given) return g.seed;
  return scenario_has_seed ? scenario_seed : kDefaultSeed;
}

fs::path prepare_out(const Globals& g) {
  std::error_code ec;
  fs::create_directories(g.out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + g.out_dir.string());
  return g.out_dir;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

Alignment parse_alignment(const std::string& text) {
  std::vector<double> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string piece = text.substr(start, comma - start);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(piece, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != piece.size()) throw ArgumentError("--align expects east,north,yaw");
    parts.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() != 3) throw ArgumentError("--align expects east,north,yaw");
  return Alignment({parts[0], parts[1]}, parts[2]);
}

void cmd_synth(const Globals& g, const fs::path& scenario_path, std::ostream& out) {
  const EvalScenario sc = load_eval_scenario(scenario_path);
  const std::uint64_t seed = effective_seed(g, sc.has_seed, sc.seed);
  const Comparison c = run_comparison(sc.path, sc.gps, sc.slam, sc.corrector, seed);
  const fs::path dir = prepare_out(g);
  write_truth_csv(dir / "truth.csv", c.truth);
  write_gps_csv(dir / "gps.csv", c.raw);
  write_slam_csv(dir / "slam.csv", c.slam);
  out << "wrote " << c.truth.size() << " samples to " << (dir / "truth.csv").string() << ", "
      << (dir / "gps.csv").string() << ", " << (dir / "slam.csv").string() << '\n';
}

void cmd_correct(const Globals& g, const fs::path& gps_path, const fs::path& slam_path,
                 const std::string& align, const std::string& anchor, std::ostream& out) {
  const std::vector<GpsFix> gps = read_gps_csv(gps_path);
  const std::vector<SlamPose> slam = read_slam_csv(slam_path);
  if (gps.empty()) throw ArgumentError(gps_path.string() + ": no GPS fixes");
  if (slam.empty()) throw ArgumentError(slam_path.string() + ": no SLAM poses");

  AnchorStrategy strategy = AnchorStrategy::kFirstFix;
  std::size_t n = 1;
  if (anchor.rfind("avg:", 0) == 0) {
    strategy = AnchorStrategy::kAverage;
    std::size_t used = 0;
    long long parsed = 0;
    try {
      parsed = std::stoll(anchor.substr(4), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != anchor.size() - 4 || parsed < 1) {
      throw ArgumentError("--anchor avg:<N> needs a positive integer N");
    }
    n = std::min<std::size_t>(static_cast<std::size_t>(parsed), gps.size());
  } else if (anchor != "first") {
    throw ArgumentError("--anchor must be 'first' or 'avg:<N>'");
  }

  const Corrector corrector = Corrector::init(std::span<const GpsFix>(gps).first(n), slam.front(),
                                              parse_alignment(align), strategy);
  std::vector<CorrectedFix> fixes;
  try {
    fixes = corrector.correct_trace(slam);
  } catch (const OrderingError& e) {
    throw ArgumentError(slam_path.string() + ": row " + std::to_string(e.index() + 1) +
                        " (line " + std::to_string(e.index() + 2) + "): " + e.what());
  }
  const fs::path dir = prepare_out(g);
  write_corrected_csv(dir / "corrected.csv", fixes);
  out << "wrote " << fixes.size() << " corrected fixes to " << (dir / "corrected.csv").string()
      << '\n';
}

void cmd_evaluate(const Globals& g, const fs::path& scenario_path, std::ostream& out) {
  const EvalScenario sc = load_eval_scenario(scenario_path);
  const std::uint64_t seed = effective_seed(g, sc.has_seed, sc.seed);
  const Comparison c = run_comparison(sc.path, sc.gps, sc.slam, sc.corrector, seed);
  const fs::path dir = prepare_out(g);
  export_metrics_csv(c, dir / "metrics.csv");
  export_csv(c, dir / "traces.csv");
  export_svg(c, dir / "paths.svg");

  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-10s %12s %16s %22s\n", "trace", "rmse_m", "loop_closure_m",
                "smoothness_deg_per_m");
  out << buf;
  auto row = [&](const char* name, const TraceMetrics& m) {
    std::snprintf(buf, sizeof(buf), "%-10s %12.3f %16.3f %22.3f\n", name, m.rmse_m,
                  m.loop_closure_m, m.smoothness_deg_per_m);
    out << buf;
  };
  row("raw", c.raw_metrics);
  row("corrected", c.corrected_metrics);
}

void cmd_quantize(double lat, double lon, int decimals, std::ostream& out) {
  const GeoCoordinate g(lat, lon);
  const GeoCoordinate q = quantize(g, decimals);
  out << "input           " << format_double(g.lat_deg) << ',' << format_double(g.lon_deg) << '\n'
      << "quantized       " << format_double(q.lat_deg) << ',' << format_double(q.lon_deg) << '\n'
      << "displacement_m  " << fixed(quantization_displacement(g, decimals), 4) << '\n'
      << "bound_m         " << fixed(max_quantization_error(lat, decimals), 4) << '\n';
}

void cmd_simulate(const Globals& g, const fs::path& scenario_path, std::ostream& out) {
  const SimScenario sc = load_sim_scenario(scenario_path);
  const std::uint64_t seed = effective_seed(g, sc.has_seed, sc.seed);
  const SimResult res = run_scenario(sc, seed);
  const fs::path dir = prepare_out(g);
  write_text_file(dir / "events.jsonl", event_log_jsonl(res.room));
  out << stats_summary(res.room);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geo-anchored AR/VR collaboration toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "random seed (default 42)");
  app.add_option("--out", g.out_dir, "output directory");

  fs::path scenario_path, gps_path, slam_path;
  std::string align = "0,0,0", anchor = "first";
  double lat = 0.0, lon = 0.0;
  int decimals = kWireDecimals;

  auto* synth = app.add_subcommand("synth", "synthesize truth/GPS/SLAM traces from a scenario");
  synth->add_option("--scenario", scenario_path)->required();
  auto* correct = app.add_subcommand("correct", "run the GPS corrector over recorded traces");
  correct->add_option("--gps", gps_path)->required();
  correct->add_option("--slam", slam_path)->required();
  correct->add_option("--align", align, "east,north,yaw_deg");
  correct->add_option("--anchor", anchor, "first | avg:<N>");
  auto* evaluate = app.add_subcommand("evaluate", "compare raw and corrected GPS on a scenario");
  evaluate->add_option("--scenario", scenario_path)->required();
  auto* quant = app.add_subcommand("quantize", "report rounding error of a coordinate");
  quant->add_option("--lat", lat)->required();
  quant->add_option("--lon", lon)->required();
  quant->add_option("--decimals", decimals);
  auto* simulate = app.add_subcommand("simulate", "run a multi-client session simulation");
  simulate->add_option("--scenario", scenario_path)->required();

  std::vector<std::string> argv_storage{"geocollab"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  g.seed_given = app.count("--seed") > 0;

  try {
    if (*synth) {
      cmd_synth(g, scenario_path, out);
    } else if (*correct) {
      cmd_correct(g, gps_path, slam_path, align, anchor, out);
    } else if (*evaluate) {
      cmd_evaluate(g, scenario_path, out);
    } else if (*quant) {
      cmd_quantize(lat, lon, decimals, out);
    } else if (*simulate) {
      cmd_simulate(g, scenario_path, out);
    }
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RoomFullError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OrderingError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace geocollab
