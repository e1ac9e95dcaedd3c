#pragma once

#include "coneglow/conemaps.hpp"
#include "coneglow/detector.hpp"
#include "coneglow/localize.hpp"
#include "coneglow/spaces.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <variant>

namespace coneglow {

using Json = nlohmann::json;

// Raised for malformed spec/report files. `where` is "line L, column C" for
// syntax errors and a JSON pointer for schema errors.
class ParseError : public DomainError {
 public:
  ParseError(std::string where, const std::string& message)
      : DomainError(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// x -> A x + b, declared nonexpansive for `norm` (Sup or Euclid).
struct AffineMap {
  Mat a;
  Vec b;
  NormId norm = NormId::Sup;

  int dim() const { return static_cast<int>(b.size()); }
  Vec operator()(const Vec& x) const { return a * x + b; }
  // Operator norm of A induced by `norm`.
  double lipschitz_constant() const;
};

using SpecDocument = std::variant<MapSpec, AffineMap>;

// Parses a map-spec document: a cone map tree or an affine map.
SpecDocument parse_spec_document(std::string_view text);
MapSpec map_spec_from_json(const Json& j);
AffineMap affine_map_from_json(const Json& j);

Json to_json(const MapSpec& spec);
Json to_json(const AffineMap& map);
Json to_json(const DetectionConfig& config);
Json to_json(const DetectionReport& report);
Json to_json(const BoundingBall& ball);
Json to_json(const HalfspacePolytope& polytope);

DetectionReport report_from_json(const Json& j);
BoundingBall ball_from_json(const Json& j);

// Parses text as JSON, mapping syntax errors to ParseError with a line anchor.
Json parse_json_text(std::string_view text);

}  // namespace coneglow
