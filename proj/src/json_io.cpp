#include "coneglow/json_io.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace coneglow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ParseError(path.empty() ? "/" : path, message);
}

const Json& field(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "/" + key, "missing field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "number is not finite");
  return v;
}

Vec vector(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
  Vec v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number(j[i], path + "/" + std::to_string(i));
  return v;
}

Mat matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
  const auto rows = static_cast<Index>(j.size());
  Mat m;
  for (Index i = 0; i < rows; ++i) {
    const Vec row = vector(j[i], path + "/" + std::to_string(i));
    if (i == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) fail(path + "/" + std::to_string(i), "ragged matrix row");
    m.row(i) = row.transpose();
  }
  return m;
}

double exponent(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
    fail(path, "exponent string must be \"inf\" or \"-inf\"");
  }
  if (!j.is_number()) fail(path, "expected a number or \"inf\"/\"-inf\"");
  const double v = j.get<double>();
  if (std::isnan(v)) fail(path, "exponent is NaN");
  return v;
}

Json exponent_to_json(double r) {
  if (r == kInf) return "inf";
  if (r == -kInf) return "-inf";
  return r;
}

Json vec_json(const Vec& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json mat_json(const Mat& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i) out.push_back(vec_json(m.row(i).transpose()));
  return out;
}

template <typename Build>
auto guarded(const std::string& path, Build&& build) {
  try {
    return build();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

MapSpec map_at(const Json& j, const std::string& path);

std::vector<MapSpec> map_list(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of maps");
  std::vector<MapSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(map_at(j[i], path + "/" + std::to_string(i)));
  return out;
}

MapSpec map_at(const Json& j, const std::string& path) {
  const Json& kind_json = field(j, path, "kind");
  if (!kind_json.is_string()) fail(path + "/kind", "expected a string");
  const auto kind = kind_json.get<std::string>();

  if (kind == "matrix") {
    Mat a = matrix(field(j, path, "entries"), path + "/entries");
    return guarded(path + "/entries", [&] { return MapSpec::matrix(std::move(a)); });
  }
  if (kind == "triangle") {
    const double c = number(field(j, path, "c"), path + "/c");
    return guarded(path + "/c", [&] { return MapSpec::triangle(c); });
  }
  if (kind == "schoen") {
    Vec a = vector(field(j, path, "a"), path + "/a");
    Vec b = vector(field(j, path, "b"), path + "/b");
    Vec c = vector(field(j, path, "c"), path + "/c");
    Vec d = vector(field(j, path, "d"), path + "/d");
    return guarded(path, [&] { return MapSpec::schoen(a, b, c, d); });
  }
  if (kind == "meansum") {
    const Json& rows = field(j, path, "rows");
    if (!rows.is_array() || rows.empty()) fail(path + "/rows", "expected a nonempty array");
    std::vector<std::vector<MeanTerm>> terms(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const std::string rpath = path + "/rows/" + std::to_string(i);
      if (!rows[i].is_array() || rows[i].empty()) fail(rpath, "expected a nonempty array of mean terms");
      for (std::size_t k = 0; k < rows[i].size(); ++k) {
        const std::string tpath = rpath + "/" + std::to_string(k);
        const Json& t = rows[i][k];
        MeanTerm term;
        term.r = exponent(field(t, tpath, "r"), tpath + "/r");
        term.sigma = vector(field(t, tpath, "sigma"), tpath + "/sigma");
        term.coeff = number(field(t, tpath, "coeff"), tpath + "/coeff");
        const double total = term.sigma.sum();
        if (std::abs(total - 1.0) > 1e-9) fail(tpath + "/sigma", "weights must sum to 1 (got " + std::to_string(total) + ")");
        term.sigma /= total;
        terms[i].push_back(std::move(term));
      }
    }
    return guarded(path, [&] { return MapSpec::mean_sum(std::move(terms)); });
  }
  if (kind == "compose") {
    auto chain = map_list(field(j, path, "maps"), path + "/maps");
    return guarded(path, [&] { return MapSpec::compose(std::move(chain)); });
  }
  if (kind == "sum") {
    auto terms = map_list(field(j, path, "maps"), path + "/maps");
    return guarded(path, [&] { return MapSpec::sum(std::move(terms)); });
  }
  if (kind == "scale") {
    const double alpha = number(field(j, path, "alpha"), path + "/alpha");
    MapSpec child = map_at(field(j, path, "map"), path + "/map");
    return guarded(path, [&] { return MapSpec::scale(alpha, std::move(child)); });
  }
  fail(path + "/kind", "unknown map kind '" + kind + "'");
}

struct ToJson {
  Json operator()(const MeanSumMap& m) const {
    Json rows = Json::array();
    for (const auto& row : m.rows) {
      Json terms = Json::array();
      for (const auto& t : row)
        terms.push_back({{"r", exponent_to_json(t.r)}, {"sigma", vec_json(t.sigma)}, {"coeff", t.coeff}});
      rows.push_back(std::move(terms));
    }
    return {{"kind", "meansum"}, {"rows", std::move(rows)}};
  }
  Json operator()(const SchoenMap& s) const {
    return {{"kind", "schoen"}, {"a", vec_json(s.a)}, {"b", vec_json(s.b)}, {"c", vec_json(s.c)}, {"d", vec_json(s.d)}};
  }
  Json operator()(const TriangleMap& t) const { return {{"kind", "triangle"}, {"c", t.c}}; }
  Json operator()(const MatrixMap& m) const { return {{"kind", "matrix"}, {"entries", mat_json(m.a)}}; }
  Json operator()(const ComposeMap& c) const { return {{"kind", "compose"}, {"maps", list(c.chain)}}; }
  Json operator()(const SumMap& s) const { return {{"kind", "sum"}, {"maps", list(s.terms)}}; }
  Json operator()(const ScaleMap& s) const { return {{"kind", "scale"}, {"alpha", s.alpha}, {"map", to_json(s.child)}}; }

  static Json list(const std::vector<MapSpec>& maps) {
    Json out = Json::array();
    for (const auto& m : maps) out.push_back(to_json(m));
    return out;
  }
};

std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

double AffineMap::lipschitz_constant() const {
  switch (norm) {
    case NormId::Sup:
      return a.cwiseAbs().rowwise().sum().maxCoeff();
    case NormId::L1:
      return a.cwiseAbs().colwise().sum().maxCoeff();
    case NormId::Euclid:
      return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
    case NormId::Variation:
      break;
  }
  throw UnsupportedError("affine map: norm must be sup, l1 or euclid");
}

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col), e.what());
  }
}

MapSpec map_spec_from_json(const Json& j) { return map_at(j, ""); }

AffineMap affine_map_from_json(const Json& j) {
  AffineMap m;
  m.a = matrix(field(j, "", "matrix"), "/matrix");
  m.b = vector(field(j, "", "offset"), "/offset");
  const Json& norm = field(j, "", "norm");
  if (!norm.is_string()) fail("/norm", "expected a string");
  try {
    m.norm = norm_from_string(norm.get<std::string>());
  } catch (const Error& e) {
    fail("/norm", e.what());
  }
  if (m.norm != NormId::Sup && m.norm != NormId::Euclid) fail("/norm", "affine maps support \"sup\" or \"euclid\"");
  if (m.a.rows() != m.a.cols() || m.a.rows() != m.b.size()) fail("/matrix", "matrix must be square and match the offset");
  if (m.lipschitz_constant() > 1.0 + 1e-12) fail("/matrix", "map is not nonexpansive for the declared norm");
  return m;
}

SpecDocument parse_spec_document(std::string_view text) {
  const Json j = parse_json_text(text);
  const Json& kind = field(j, "", "kind");
  if (kind.is_string() && kind.get<std::string>() == "affine") return affine_map_from_json(j);
  return map_spec_from_json(j);
}

Json to_json(const MapSpec& spec) { return std::visit(ToJson{}, spec.node().payload); }

Json to_json(const AffineMap& map) {
  return {{"kind", "affine"}, {"matrix", mat_json(map.a)}, {"offset", vec_json(map.b)}, {"norm", to_string(map.norm)}};
}

Json to_json(const DetectionConfig& config) {
  return {{"box_radius", config.box_radius},
          {"max_samples", config.max_samples},
          {"seed", config.seed},
          {"gap_tol", config.gap_tol}};
}

Json to_json(const DetectionReport& report) {
  Json witnesses = Json::array();
  for (const auto& w : report.witnesses) {
    Json mask = nullptr;
    if (report.kind != DetectionKind::SmoothFixedPoint) {
      mask = Json::array();
      for (int j = 0; j < report.dim; ++j)
        if ((w.mask >> j) & 1u) mask.push_back(j);
    }
    witnesses.push_back({{"mask", std::move(mask)}, {"point", vec_json(w.point)}});
  }
  return {{"kind", to_string(report.kind)},
          {"status", to_string(report.status)},
          {"dim", report.dim},
          {"samples_used", report.samples_used},
          {"subsets_covered", report.subsets_covered},
          {"total_subsets", report.total_subsets},
          {"seed", report.config.seed},
          {"config", to_json(report.config)},
          {"witnesses", std::move(witnesses)}};
}

Json to_json(const BoundingBall& ball) {
  return {{"metric", to_string(ball.metric)}, {"center", vec_json(ball.center)}, {"radius", ball.radius}};
}

Json to_json(const HalfspacePolytope& polytope) {
  Json rows = Json::array();
  for (const auto& h : polytope.rows) rows.push_back({{"normal", vec_json(h.normal)}, {"offset", h.offset}});
  return {{"rows", std::move(rows)}};
}

DetectionReport report_from_json(const Json& j) {
  DetectionReport r;
  const Json& kind = field(j, "", "kind");
  if (!kind.is_string()) fail("/kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "eigenvector")
    r.kind = DetectionKind::Eigenvector;
  else if (k == "sup_fixed_point")
    r.kind = DetectionKind::SupFixedPoint;
  else if (k == "smooth_fixed_point")
    r.kind = DetectionKind::SmoothFixedPoint;
  else
    fail("/kind", "unknown report kind '" + k + "'");

  const Json& status = field(j, "", "status");
  if (!status.is_string()) fail("/status", "expected a string");
  const auto s = status.get<std::string>();
  if (s == "Confirmed")
    r.status = DetectionStatus::Confirmed;
  else if (s == "Undetermined")
    r.status = DetectionStatus::Undetermined;
  else
    fail("/status", "unknown status '" + s + "'");

  auto integer = [&](const char* key) -> const Json& {
    const Json& v = field(j, "", key);
    if (!v.is_number_integer()) fail(std::string("/") + key, "expected an integer");
    return v;
  };
  r.dim = integer("dim").get<int>();
  if (r.dim < 1 || r.dim > kMaxDetectionDim) fail("/dim", "dimension out of range");
  r.samples_used = integer("samples_used").get<long>();
  r.subsets_covered = integer("subsets_covered").get<std::uint64_t>();
  r.total_subsets = integer("total_subsets").get<std::uint64_t>();

  const Json& config = field(j, "", "config");
  r.config.box_radius = number(field(config, "/config", "box_radius"), "/config/box_radius");
  const Json& budget = field(config, "/config", "max_samples");
  if (!budget.is_number_integer()) fail("/config/max_samples", "expected an integer");
  r.config.max_samples = budget.get<long>();
  const Json& seed = field(config, "/config", "seed");
  if (!seed.is_number_unsigned()) fail("/config/seed", "expected an unsigned integer");
  r.config.seed = seed.get<std::uint64_t>();
  r.config.gap_tol = number(field(config, "/config", "gap_tol"), "/config/gap_tol");

  const Json& witnesses = field(j, "", "witnesses");
  if (!witnesses.is_array()) fail("/witnesses", "expected an array");
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    const std::string wpath = "/witnesses/" + std::to_string(i);
    Witness w;
    w.point = vector(field(witnesses[i], wpath, "point"), wpath + "/point");
    if (w.point.size() != r.dim) fail(wpath + "/point", "point length does not match dim");
    const Json& mask = field(witnesses[i], wpath, "mask");
    if (mask.is_array()) {
      for (const auto& idx : mask) {
        if (!idx.is_number_integer()) fail(wpath + "/mask", "expected integer indices");
        const int b = idx.get<int>();
        if (b < 0 || b >= r.dim) fail(wpath + "/mask", "index out of range");
        w.mask |= 1u << b;
      }
    } else if (!mask.is_null()) {
      fail(wpath + "/mask", "expected an index array or null");
    }
    r.witnesses.push_back(std::move(w));
  }
  return r;
}

BoundingBall ball_from_json(const Json& j) {
  BoundingBall b;
  const Json& metric = field(j, "", "metric");
  if (!metric.is_string()) fail("/metric", "expected a string");
  try {
    b.metric = ball_metric_from_string(metric.get<std::string>());
  } catch (const Error& e) {
    fail("/metric", e.what());
  }
  b.center = vector(field(j, "", "center"), "/center");
  b.radius = number(field(j, "", "radius"), "/radius");
  if (b.radius < 0) fail("/radius", "radius must be nonnegative");
  return b;
}

}  // namespace coneglow
