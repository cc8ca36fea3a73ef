#pragma once

// Substitution rules over box-supported prototiles, patch expansion, control
// points, return vectors, and the desk-scale combinatorial checks.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pisotiles/expansion.hpp"

namespace pisotiles {

/// Axis-aligned box, one [lo, hi] interval per axis.
struct Box {
    std::vector<std::array<double, 2>> iv;

    int dim() const { return static_cast<int>(iv.size()); }
    double volume() const;
    Box translate(const Vec& v) const;
    /// Image under a diagonal linear map (per-axis factors, possibly negative).
    Box scale_axes(const std::vector<double>& factors) const;
    bool contains(const Box& inner, double tol) const;
    bool interior_intersects(const Box& other, double tol) const;
    static Box product(const Box& a, const Box& b);
};

struct Prototile {
    int label;  // 1-based type index
    Box support;
};

struct ValidationReport {
    bool valid = true;
    std::vector<std::string> violations;
};

/// Tile-substitution: prototiles, digit sets and the designated-child map.
struct SubstitutionRule {
    std::vector<Prototile> prototiles;
    // digits[i][j]: translations placing type-(i+1) children inside the
    // inflated type-(j+1) tile
    std::vector<std::vector<std::vector<Vec>>> digits;
    ExpansionMap expansion;
    // per type: index into the canonical child enumeration (i ascending,
    // digits in declaration order)
    std::vector<int> tile_map;

    int num_types() const { return static_cast<int>(prototiles.size()); }
    /// Children of type j (0-based) in canonical order, as (type, digit).
    std::vector<std::pair<int, Vec>> children_of(int j) const;
};

struct TilingPatch {
    struct Tile {
        int label;  // 1-based
        Vec t;
    };
    std::vector<Tile> tiles;
    int generation = 0;
    std::optional<std::vector<Vec>> control_points;  // parallel to tiles
};

struct ReturnVectorSet {
    std::vector<Vec> vectors;               // deduplicated, 0 included, negation-closed
    std::vector<std::vector<Vec>> by_type;  // per-type difference sets
    double window = 0.0;
};

Eigen::MatrixXi substitution_matrix(const SubstitutionRule& rule);
bool is_primitive(const Eigen::MatrixXi& M);

ValidationReport validate_rule(const SubstitutionRule& rule);

TilingPatch expand(const SubstitutionRule& rule, const TilingPatch& patch, int k,
                   std::size_t tile_cap = 1000000);

struct SeedResult {
    TilingPatch seed;
    int power;  // nesting holds for omega^power
};
SeedResult fixed_point_seed(const SubstitutionRule& rule, int max_power = 0);

/// Per-prototile control point offsets (fixed point of the tile-map
/// contraction); resolves each tile's control point as translation + offset.
std::vector<Vec> control_point_offsets(const SubstitutionRule& rule);
void attach_control_points(const SubstitutionRule& rule, TilingPatch& patch);

ReturnVectorSet return_vectors(const TilingPatch& patch, double window,
                               std::size_t cap = 10000);

/// Nonzero translation candidates mapping the window patch into itself.
std::vector<Vec> periods(const TilingPatch& patch, double window);

/// Number of translational classes of R-patches around interior control points.
int flc_census(const TilingPatch& patch, double R);

/// Minimum positive gap of the difference set of `points` within `window`.
double meyer_gap(const std::vector<Vec>& points, double window);

SubstitutionRule direct_product(const SubstitutionRule& a, const SubstitutionRule& b);

}  // namespace pisotiles
