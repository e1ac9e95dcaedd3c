// coneglow: detection, localization and the Schoen benchmark from the command line.
//
// Exit codes: 0 Confirmed, 2 Undetermined, 1 error (no output file is written).

#include "coneglow/detector.hpp"
#include "coneglow/fixtures.hpp"
#include "coneglow/json_io.hpp"
#include "coneglow/localize.hpp"

#include <CLI11.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

using namespace coneglow;

namespace {

constexpr int kConfirmed = 0;
constexpr int kError = 1;
constexpr int kUndetermined = 2;

struct Options {
  std::string spec_path;
  std::string report_path;
  std::string out_path;
  std::string format = "csv";
  DetectionConfig config;
  int trials = 500;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to --out, or stdout when no path is given.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

unsigned worker_count() {
  const char* env = std::getenv("CONEGLOW_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw Error("CONEGLOW_THREADS must be a positive integer");
  return static_cast<unsigned>(n);
}

SpecDocument load_spec(const std::string& path) {
  try {
    return parse_spec_document(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

int status_code(DetectionStatus s) { return s == DetectionStatus::Confirmed ? kConfirmed : kUndetermined; }

std::string vec_text(const Vec& x) {
  std::ostringstream ss;
  ss << std::setprecision(10) << "(";
  for (Index i = 0; i < x.size(); ++i) ss << (i ? ", " : "") << x(i);
  ss << ")";
  return ss.str();
}

int cmd_detect(const Options& opt) {
  opt.config.validate();
  const SpecDocument doc = load_spec(opt.spec_path);
  DetectionReport report;
  Json spec_json;
  if (const auto* spec = std::get_if<MapSpec>(&doc)) {
    report = detect_eigenvector(*spec, opt.config);
    spec_json = to_json(*spec);
  } else {
    const auto& affine = std::get<AffineMap>(doc);
    const VectorMap f = [&](const Vec& x) { return affine(x); };
    report = affine.norm == NormId::Sup ? detect_fixed_point_sup(f, affine.dim(), opt.config)
                                        : detect_fixed_point_smooth(f, affine.dim(), opt.config);
    spec_json = to_json(affine);
  }
  Json j = to_json(report);
  j["spec"] = spec_json;
  emit(opt.out_path, j.dump(2) + "\n");
  std::cerr << to_string(report.status) << ": " << report.subsets_covered << "/" << report.total_subsets
            << " covered after " << report.samples_used << " samples\n";
  return status_code(report.status);
}

int cmd_localize(const Options& opt) {
  const SpecDocument doc = load_spec(opt.spec_path);
  DetectionReport report;
  try {
    report = report_from_json(parse_json_text(read_file(opt.report_path)));
  } catch (const ParseError& e) {
    throw Error(opt.report_path + ": " + e.what());
  }
  if (report.status != DetectionStatus::Confirmed) throw Error("report is Undetermined: nothing to localize");

  Json out;
  bool inside = true;
  if (const auto* spec = std::get_if<MapSpec>(&doc)) {
    if (report.kind != DetectionKind::Eigenvector) throw Error("report was not produced by an eigenvector run");
    if (report.dim != spec->dim()) throw Error("report dimension does not match the spec");
    const BoundingBall ball = localize_eigenvectors(report);
    const EigenResult eig = power_iteration(*spec, Vec::Ones(spec->dim()));
    const double d = ball.distance_to_center(eig.vector);
    inside = eig.converged && d <= ball.radius;
    std::cerr << "eigenvector " << vec_text(eig.vector) << " eigenvalue " << std::setprecision(10) << eig.eigenvalue
              << (eig.converged ? "" : " (not converged)") << "\n"
              << "hilbert distance to center " << d << " vs radius " << ball.radius << "\n";
    out = to_json(ball);
    out["eigenvector"] = std::vector<double>(eig.vector.data(), eig.vector.data() + eig.vector.size());
    out["eigenvalue"] = eig.eigenvalue;
  } else {
    const auto& affine = std::get<AffineMap>(doc);
    if (report.dim != affine.dim()) throw Error("report dimension does not match the spec");
    std::vector<Vec> points;
    for (const auto& w : report.witnesses) points.push_back(w.point);
    const Mat gap = Mat::Identity(affine.dim(), affine.dim()) - affine.a;
    Eigen::FullPivLU<Mat> lu(gap);
    if (affine.norm == NormId::Sup) {
      if (report.kind != DetectionKind::SupFixedPoint) throw Error("report was not produced by a sup-norm run");
      const BoundingBall ball = localize_fixed_points(points, NormId::Sup);
      out = to_json(ball);
      if (lu.isInvertible()) {
        const Vec fixed = lu.solve(affine.b);
        inside = ball.contains(fixed, 1e-9);
        std::cerr << "fixed point " << vec_text(fixed) << " sup distance to center " << ball.distance_to_center(fixed)
                  << " vs radius " << ball.radius << "\n";
      }
    } else {
      if (report.kind != DetectionKind::SmoothFixedPoint) throw Error("report was not produced by a Euclidean run");
      const VectorMap f = [&](const Vec& x) { return affine(x); };
      const PolytopeResult poly = halfspace_polytope(f, points);
      for (const auto& w : poly.warnings) std::cerr << "warning: " << w << "\n";
      out = to_json(poly.polytope);
      out["bounded"] = poly.bounded;
      out["empty"] = poly.empty;
      if (lu.isInvertible()) {
        const Vec fixed = lu.solve(affine.b);
        inside = poly.polytope.contains(fixed);
        std::cerr << "fixed point " << vec_text(fixed) << (inside ? " inside" : " OUTSIDE") << " the polytope\n";
      }
    }
  }
  out["config"] = to_json(report.config);
  out["seed"] = report.config.seed;
  if (!inside) throw Error("membership check failed: the computed solution lies outside the localization");
  emit(opt.out_path, out.dump(2) + "\n");
  return kConfirmed;
}

int cmd_reproduce(const Options& opt) {
  if (opt.format != "csv" && opt.format != "json") throw Error("--format must be csv or json");
  const auto reports =
      detect_eigenvector_trials(fixtures::schoen_composite(), opt.config, opt.trials, worker_count());

  std::vector<long> counts;
  long total = 0;
  int confirmed = 0;
  for (const auto& r : reports) {
    counts.push_back(r.samples_used);
    total += r.samples_used;
    confirmed += r.status == DetectionStatus::Confirmed;
  }
  std::vector<long> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 ? static_cast<double>(sorted[m / 2])
                              : 0.5 * static_cast<double>(sorted[m / 2 - 1] + sorted[m / 2]);
  const double mean = static_cast<double>(total) / static_cast<double>(m);

  std::ostringstream ss;
  ss << std::setprecision(10);
  if (opt.format == "csv") {
    ss << "# trials=" << opt.trials << " seed=" << opt.config.seed << " box_radius=" << opt.config.box_radius
       << " max_samples=" << opt.config.max_samples << " gap_tol=" << opt.config.gap_tol << "\n";
    ss << "trial_index,samples_used,confirmed,min,max,mean,median\n";
    for (std::size_t i = 0; i < reports.size(); ++i)
      ss << i << "," << counts[i] << "," << (reports[i].status == DetectionStatus::Confirmed ? 1 : 0) << ",,,,\n";
    ss << "-1," << total << "," << confirmed << "," << sorted.front() << "," << sorted.back() << "," << mean << ","
       << median << "\n";
  } else {
    Json j;
    j["trials"] = opt.trials;
    j["seed"] = opt.config.seed;
    j["config"] = to_json(opt.config);
    j["samples_used"] = counts;
    Json flags = Json::array();
    for (const auto& r : reports) flags.push_back(r.status == DetectionStatus::Confirmed);
    j["confirmed"] = flags;
    j["summary"] = {{"confirmed", confirmed}, {"min", sorted.front()}, {"max", sorted.back()}, {"mean", mean},
                    {"median", median}};
    ss << j.dump(2) << "\n";
  }
  emit(opt.out_path, ss.str());
  std::cerr << std::setprecision(6) << "observed   min " << sorted.front() << ", max " << sorted.back() << ", mean "
            << mean << ", median " << median << " (" << confirmed << "/" << opt.trials << " confirmed)\n"
            << "reference  min 10, max 303, mean 54.4, median 39\n";
  return confirmed == opt.trials ? kConfirmed : kUndetermined;
}

void add_detection_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--seed", opt.config.seed, "Random seed")->capture_default_str();
  cmd->add_option("--box-radius", opt.config.box_radius, "Sampling box radius R")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-samples", opt.config.max_samples, "Sample budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--gap-tol", opt.config.gap_tol, "Relative strict-gap tolerance")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certify and localize eigenvectors and fixed points of nonexpansive maps"};
  app.require_subcommand(1);
  Options opt;

  auto* detect = app.add_subcommand("detect", "Randomized detection; writes a report");
  detect->add_option("--spec", opt.spec_path, "Map spec JSON")->required()->check(CLI::ExistingFile);
  detect->add_option("--out", opt.out_path, "Report path (default stdout)");
  add_detection_flags(detect, opt);

  auto* localize = app.add_subcommand("localize", "Bounding ball (or polytope) from a Confirmed report");
  localize->add_option("--spec", opt.spec_path, "Map spec JSON")->required()->check(CLI::ExistingFile);
  localize->add_option("--report", opt.report_path, "Report from detect")->required()->check(CLI::ExistingFile);
  localize->add_option("--out", opt.out_path, "Output path (default stdout)");

  auto* reproduce = app.add_subcommand("reproduce-schoen", "Sample counts over repeated runs on the Schoen composite");
  reproduce->add_option("--trials", opt.trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  reproduce->add_option("--format", opt.format, "csv or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  reproduce->add_option("--out", opt.out_path, "Output path (default stdout)");
  add_detection_flags(reproduce, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*detect) return cmd_detect(opt);
    if (*localize) return cmd_localize(opt);
    return cmd_reproduce(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
