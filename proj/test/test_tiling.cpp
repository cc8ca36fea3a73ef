#include <doctest.h>

#include <set>

#include "pisotiles/io.hpp"
#include "pisotiles/tiling.hpp"

using namespace pisotiles;

namespace {

SubstitutionRule load(const char* name) {
    return rule_from_file(std::string(FIXTURE_DIR) + "/" + name);
}

std::string key(const Vec& v) {
    std::string s;
    for (int i = 0; i < v.size(); ++i)
        s += std::to_string(static_cast<long long>(std::llround(v[i] * 1e9))) + ",";
    return s;
}

}  // namespace

TEST_CASE("substitution matrices and primitivity") {
    const SubstitutionRule fib = load("fib.json");
    Eigen::MatrixXi M = substitution_matrix(fib);
    REQUIRE(M.rows() == 2);
    CHECK(M(0, 0) == 1);
    CHECK(M(0, 1) == 1);
    CHECK(M(1, 0) == 1);
    CHECK(M(1, 1) == 0);
    CHECK(is_primitive(M));

    const SubstitutionRule np = load("nonpisot1d.json");
    Eigen::MatrixXi N = substitution_matrix(np);
    Eigen::MatrixXi expect(3, 3);
    expect << 0, 0, 3, 1, 0, 1, 0, 1, 0;
    CHECK(N == expect);
    CHECK(is_primitive(N));

    Eigen::MatrixXi perm(2, 2);
    perm << 0, 1, 1, 0;  // a swap is irreducible but not primitive
    CHECK_FALSE(is_primitive(perm));
}

TEST_CASE("validation accepts the fixtures and flags broken rules") {
    for (const char* f : {"fib.json", "nonpisot1d.json", "fib_x_fib.json", "fib_x_nonpisot.json"}) {
        const ValidationReport rep = validate_rule(load(f));
        INFO(f);
        CHECK(rep.valid);
        CHECK(rep.violations.empty());
    }
    SubstitutionRule broken = load("fib.json");
    broken.digits[1][0][0][0] = 1.7;  // shifts the second child off its slot
    const ValidationReport rep = validate_rule(broken);
    CHECK_FALSE(rep.valid);
    CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("expansion counts follow the matrix power") {
    const SubstitutionRule fib = load("fib.json");
    TilingPatch unit;
    unit.tiles.push_back({1, Vec::Zero(1)});
    Eigen::MatrixXi M = substitution_matrix(fib);
    Eigen::VectorXi census(2);
    census << 1, 0;
    for (int k = 1; k <= 10; ++k) {
        census = M * census;
        const TilingPatch p = expand(fib, unit, k);
        int c1 = 0, c2 = 0;
        for (const auto& t : p.tiles) (t.label == 1 ? c1 : c2)++;
        CHECK(c1 == census[0]);
        CHECK(c2 == census[1]);
    }
    CHECK_THROWS_AS((void)expand(fib, unit, 30, 1000), Error);  // cap
}

TEST_CASE("self-nesting seed") {
    const SubstitutionRule fib = load("fib.json");
    const SeedResult sr = fixed_point_seed(fib);
    CHECK(sr.power == 1);
    REQUIRE(sr.seed.tiles.size() == 1);
    CHECK(sr.seed.tiles[0].label == 1);
    CHECK(sr.seed.tiles[0].t.norm() < 1e-12);

    // the seed's expansions agree on their common region
    const TilingPatch p1 = expand(fib, sr.seed, 6);
    const TilingPatch p2 = expand(fib, sr.seed, 8);
    std::set<std::string> tiles2;
    for (const auto& t : p2.tiles) tiles2.insert(std::to_string(t.label) + "@" + key(t.t));
    for (const auto& t : p1.tiles)
        CHECK(tiles2.count(std::to_string(t.label) + "@" + key(t.t)) == 1);
}

TEST_CASE("control points commute with the substitution") {
    for (const char* f : {"fib.json", "nonpisot1d.json", "fib_x_fib.json"}) {
        const SubstitutionRule rule = load(f);
        const std::vector<Vec> off = control_point_offsets(rule);
        const Mat M = rule.expansion.matrix();
        for (int j = 0; j < rule.num_types(); ++j) {
            const auto ch = rule.children_of(j);
            const auto& [i, u] = ch.at(rule.tile_map.at(j));
            // the designated child's point is the image of the parent's point
            CHECK((M * off[j] - (u + off[i])).norm() < 1e-10);
        }
        // over a whole patch: c(child of T at digit u) = phi(t) + u + off
        const SeedResult sr = fixed_point_seed(rule);
        TilingPatch patch = expand(rule, sr.seed, 4);
        attach_control_points(rule, patch);
        TilingPatch next = expand(rule, patch, 1);
        attach_control_points(rule, next);
        for (size_t a = 0; a < patch.tiles.size(); ++a) {
            const auto& T = patch.tiles[a];
            const auto tch = rule.children_of(T.label - 1);
            const auto& [i, u] = tch.at(rule.tile_map.at(T.label - 1));
            const Vec expected = M * (*patch.control_points)[a];
            // find the designated child in the next patch
            const Vec child_t = M * T.t + u;
            bool found = false;
            for (size_t b = 0; b < next.tiles.size(); ++b)
                if (next.tiles[b].label == i + 1 && (next.tiles[b].t - child_t).norm() < 1e-9) {
                    CHECK(((*next.control_points)[b] - expected).norm() < 1e-10);
                    found = true;
                    break;
                }
            CHECK(found);
        }
    }
}

TEST_CASE("return vectors: zero included, negation-closed, window-monotone") {
    const SubstitutionRule fib = load("fib.json");
    TilingPatch patch = expand(fib, fixed_point_seed(fib).seed, 10);
    attach_control_points(fib, patch);

    const ReturnVectorSet small = return_vectors(patch, 20.0);
    const ReturnVectorSet big = return_vectors(patch, 40.0);
    CHECK(small.vectors.front().norm() == 0.0);

    std::set<std::string> big_keys;
    for (const Vec& v : big.vectors) big_keys.insert(key(v));
    for (const Vec& v : small.vectors) {
        CHECK(big_keys.count(key(v)) == 1);
        CHECK(big_keys.count(key(Vec(-v))) == 1);
    }
    CHECK(small.vectors.size() < big.vectors.size());
}

TEST_CASE("periods of a genuinely periodic patch") {
    TilingPatch lattice;
    std::vector<Vec> cps;
    for (int i = 0; i < 30; ++i) {
        lattice.tiles.push_back({1, Vec::Constant(1, static_cast<double>(i))});
        cps.push_back(Vec::Constant(1, static_cast<double>(i)));
    }
    lattice.control_points = cps;
    const std::vector<Vec> per = periods(lattice, 16.0);
    bool has_one = false;
    for (const Vec& p : per)
        if (std::abs(p[0] - 1.0) < 1e-9) has_one = true;
    CHECK(has_one);
}

TEST_CASE("local complexity census is finite and stable") {
    const SubstitutionRule fib = load("fib.json");
    TilingPatch p1 = expand(fib, fixed_point_seed(fib).seed, 11);
    attach_control_points(fib, p1);
    TilingPatch p2 = expand(fib, fixed_point_seed(fib).seed, 13);
    attach_control_points(fib, p2);
    const int c1 = flc_census(p1, 3.0);
    const int c2 = flc_census(p2, 3.0);
    CHECK(c1 > 0);
    CHECK(c1 == c2);  // patch growth reveals no new 3-ball classes
    CHECK_THROWS_AS((void)flc_census(p1, 1e6), Error);  // window too small
}

TEST_CASE("difference-set gap is monotone in the window") {
    const SubstitutionRule fib = load("fib.json");
    TilingPatch patch = expand(fib, fixed_point_seed(fib).seed, 12);
    attach_control_points(fib, patch);
    double prev = 1e300;
    for (double w : {10.0, 20.0, 40.0, 80.0}) {
        const double g = meyer_gap(*patch.control_points, w);
        CHECK(g <= prev + 1e-12);
        CHECK(g > 0.3);  // bounded below across the doublings
        prev = g;
    }
}

TEST_CASE("direct products") {
    const SubstitutionRule fib = load("fib.json");
    const SubstitutionRule np = load("nonpisot1d.json");

    const SubstitutionRule ff = direct_product(fib, fib);
    const Eigen::MatrixXi M = substitution_matrix(fib);
    Eigen::MatrixXi kron(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) kron.block(2 * i, 2 * j, 2, 2) = M(i, j) * M;
    CHECK(substitution_matrix(ff) == kron);
    CHECK(ff.expansion.J() == 2);
    CHECK(validate_rule(ff).valid);

    // the shipped fixture is the same rule
    const SubstitutionRule fixture = load("fib_x_fib.json");
    CHECK(substitution_matrix(fixture) == kron);

    const SubstitutionRule fn = direct_product(fib, np);
    const Eigen::MatrixXi Mn = substitution_matrix(np);
    Eigen::MatrixXi kron2(6, 6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) kron2.block(3 * i, 3 * j, 3, 3) = M(i, j) * Mn;
    CHECK(substitution_matrix(fn) == kron2);
    CHECK(fn.expansion.J() == 1);
    CHECK(fn.expansion.d() == 2);
    CHECK(fn.expansion.min_poly().degree() == 5);
    CHECK(validate_rule(fn).valid);
    CHECK(substitution_matrix(load("fib_x_nonpisot.json")) == kron2);
}

TEST_CASE("box primitives") {
    Box b{{{0.0, 2.0}, {1.0, 3.0}}};
    CHECK(b.volume() == doctest::Approx(4.0));
    Vec t(2);
    t << 1.0, -1.0;
    const Box moved = b.translate(t);
    CHECK(moved.iv[0][0] == doctest::Approx(1.0));
    CHECK(moved.iv[1][1] == doctest::Approx(2.0));
    const Box flipped = b.scale_axes({-1.0, 2.0});
    CHECK(flipped.iv[0][0] == doctest::Approx(-2.0));
    CHECK(flipped.iv[0][1] == doctest::Approx(0.0));
    CHECK(b.contains(Box{{{0.5, 1.0}, {1.5, 2.0}}}, 0.0));
    CHECK_FALSE(b.interior_intersects(Box{{{2.0, 3.0}, {1.0, 3.0}}}, 1e-12));
    CHECK(b.interior_intersects(Box{{{1.9, 3.0}, {1.0, 3.0}}}, 1e-12));
}
