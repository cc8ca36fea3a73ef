#pragma once

// JSON ingest/export for rules, polynomials and patches; SVG rendering; the
// canonical deterministic serializer used for all machine-readable output.

#include <json.hpp>
#include <string>

#include "pisotiles/tiling.hpp"

namespace pisotiles {

using Json = nlohmann::json;

IntPolynomial poly_from_json(const Json& j);
Json poly_to_json(const IntPolynomial& p);

ExpansionMap expansion_from_json(const Json& j);
Json expansion_to_json(const ExpansionMap& phi);

SubstitutionRule rule_from_json(const Json& j);
SubstitutionRule rule_from_file(const std::string& path);
Json rule_to_json(const SubstitutionRule& rule);

Json patch_to_json(const TilingPatch& patch);

/// SVG for patches of dimension <= 2; 1-D patches are drawn as unit-height
/// strips.  Throws RenderUnsupported above two dimensions.
std::string render_svg(const SubstitutionRule& rule, const TilingPatch& patch);

/// Deterministic serialization: keys lexicographic, floats at 17 significant
/// digits, no locale dependence.  Always newline-terminated.
std::string canonical_dump(const Json& j);

Json json_from_vec(const Vec& v);
Vec vec_from_json(const Json& j, int expect_dim = -1);
Json json_from_mat(const Mat& M);

std::string read_file(const std::string& path);

}  // namespace pisotiles
