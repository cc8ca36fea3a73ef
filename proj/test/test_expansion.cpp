#include <doctest.h>

#include <random>

#include "pisotiles/expansion.hpp"

using namespace pisotiles;

namespace {

IntPolynomial make_poly(std::initializer_list<long long> cs) {
    std::vector<BigInt> v;
    for (long long c : cs) v.emplace_back(c);
    return IntPolynomial(std::move(v));
}

constexpr double kPhi = 1.6180339887498949;
constexpr double kLam = 1.6716998816571609;       // real root of x^3 - x - 3
constexpr double kCre = -0.83584994082858044;     // its complex pair
constexpr double kCim = 1.0468693188499816;

ExpansionMap golden_map() { return {{kPhi}, {}, 1, make_poly({-1, -1, 1})}; }
ExpansionMap rotation_map() { return {{}, {{kCre, kCim}}, 1, make_poly({-3, -1, 0, 1})}; }
ExpansionMap mixed_map() { return {{kLam}, {{kCre, kCim}}, 2, make_poly({-3, -1, 0, 1})}; }

Vec random_block_vector(const ExpansionMap& e, std::mt19937& rng, int j) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec x = Vec::Zero(e.d());
    for (int k = 0; k < e.m(); ++k) x[j * e.m() + k] = u(rng);
    return x;
}

}  // namespace

TEST_CASE("construction validates expansiveness and root membership") {
    CHECK_NOTHROW(golden_map());
    CHECK_NOTHROW(rotation_map());
    CHECK_NOTHROW(mixed_map());
    // contraction rejected
    CHECK_THROWS_AS(ExpansionMap({0.5}, {}, 1, make_poly({-1, -1, 1})), Error);
    // eigenvalue not a root of min_poly rejected
    CHECK_THROWS_AS(ExpansionMap({2.0}, {}, 1, make_poly({-1, -1, 1})), Error);
}

TEST_CASE("dimensions and flags") {
    const ExpansionMap m = mixed_map();
    CHECK(m.s() == 1);
    CHECK(m.t() == 1);
    CHECK(m.J() == 2);
    CHECK(m.m() == 3);
    CHECK(m.d() == 6);
    CHECK(m.conjugate_complete());      // blocks exhaust the cubic's roots
    CHECK_FALSE(golden_map().conjugate_complete());
    CHECK(m.min_modulus() == doctest::Approx(1.339619533424534));
    CHECK(m.max_modulus() == doctest::Approx(kLam));
    CHECK(golden_map().is_diagonal());
    CHECK_FALSE(rotation_map().is_diagonal());
}

TEST_CASE("apply / transpose / inverse agree with the dense matrix") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const ExpansionMap& e : {golden_map(), rotation_map(), mixed_map()}) {
        const Mat M = e.matrix();
        for (int trial = 0; trial < 20; ++trial) {
            Vec x(e.d());
            for (int i = 0; i < e.d(); ++i) x[i] = u(rng);
            CHECK((e.apply(x) - M * x).norm() < 1e-12);
            CHECK((e.apply_transpose(x) - M.transpose() * x).norm() < 1e-12);
            CHECK((e.apply_inverse(e.apply(x)) - x).norm() < 1e-12);
        }
    }
}

TEST_CASE("block norm equals the blockwise maximum") {
    const ExpansionMap e = mixed_map();
    Vec x = Vec::Zero(6);
    x << 0.5, 3.0, 4.0, -0.25, 0.1, 0.2;
    // copy 0: real slot 0.5; rotation slot norm 5.0; copy 1: 0.25 and ~0.2236
    CHECK(e.block_norm(x) == doctest::Approx(5.0));
}

TEST_CASE("complex-coordinate identities") {
    std::mt19937 rng(1234);
    for (const ExpansionMap& e : {golden_map(), rotation_map(), mixed_map()}) {
        const CVec D = e.f_eigenvalues();
        for (int trial = 0; trial < 1000; ++trial) {
            const int j = trial % e.J();
            const Vec x = random_block_vector(e, rng, j);
            const Vec y = random_block_vector(e, rng, j);
            const FImage fx = e.f_transform(x);
            const FImage fy = e.f_transform(y);

            // conjugate-pair structure
            for (int k = 0; k < e.t(); ++k)
                CHECK(std::abs(fx.entries[e.s() + 2 * k] -
                               std::conj(fx.entries[e.s() + 2 * k + 1])) < 1e-12);

            // transform conjugates the block action to a diagonal one
            const FImage fpx = e.f_transform(e.apply(x));
            const FImage ftx = e.f_transform(e.apply_transpose(x));
            for (int k = 0; k < e.m(); ++k) {
                CHECK(std::abs(fpx.entries[k] - D[k] * fx.entries[k]) < 1e-12);
                CHECK(std::abs(ftx.entries[k] - std::conj(D[k]) * fx.entries[k]) < 1e-12);
            }

            // scalar products are preserved
            std::complex<double> herm = 0.0;
            for (int k = 0; k < e.m(); ++k) herm += fx.entries[k] * std::conj(fy.entries[k]);
            CHECK(std::abs(herm - std::complex<double>(x.dot(y), 0.0)) < 1e-12);

            // roundtrip
            CHECK((e.f_inverse(fx) - x).norm() < 1e-12);
        }
    }
}

TEST_CASE("transform rejects vectors spanning two copies") {
    const ExpansionMap e = mixed_map();
    Vec x = Vec::Zero(6);
    x[0] = 1.0;
    x[3] = 1.0;
    CHECK_THROWS_AS((void)e.f_transform(x), Error);
    CHECK(e.f_transform(Vec::Zero(6)).j == 0);  // zero vector defaults to the first copy
}

TEST_CASE("alpha and beta vectors") {
    const ExpansionMap e = mixed_map();
    for (int j = 0; j < e.J(); ++j) {
        const Vec a = e.alpha(j);
        CHECK(a.sum() == doctest::Approx(e.m()));
        const Vec b = e.beta(j);
        // all F-coordinates of alpha have modulus 1, so beta equals alpha
        CHECK((b - a).norm() < 1e-12);
        // defining property: F(beta)_k = 1/conj(F(alpha)_k)
        const FImage fa = e.f_transform(a);
        const FImage fb = e.f_transform(b);
        for (int k = 0; k < e.m(); ++k)
            CHECK(std::abs(fb.entries[k] * std::conj(fa.entries[k]) - 1.0) < 1e-12);
    }
    // a vanishing F-coordinate is rejected
    Vec bad = Vec::Zero(6);
    bad[0] = 1.0;  // rotation slot is zero
    CHECK_THROWS_AS((void)e.beta_for(bad), Error);
}

TEST_CASE("iterated orbits stay independent") {
    const ExpansionMap e = mixed_map();
    std::mt19937 rng(5);
    const Vec x = random_block_vector(e, rng, 1);
    const VandermondeFamily fam = e.vandermonde_family(x);
    CHECK(fam.family.size() == 3);
    CHECK(fam.independent);
    CHECK((fam.family[1] - e.apply(fam.family[0])).norm() < 1e-12);
}

TEST_CASE("projections") {
    const ExpansionMap e = mixed_map();
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec x(6);
    for (int i = 0; i < 6; ++i) x[i] = u(rng);
    CHECK((e.project(x, 0) + e.project(x, 1) - x).norm() < 1e-14);
    CHECK((e.apply(e.project(x, 0)) - e.project(e.apply(x), 0)).norm() < 1e-12);
}

TEST_CASE("base-point interpolation") {
    const ExpansionMap g = golden_map();
    const Mat tau = fit_tau(g, {Vec::Constant(1, 2.0)});
    CHECK(tau(0, 0) == doctest::Approx(0.5));

    const ExpansionMap m = mixed_map();
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec> ys;
    for (int j = 0; j < m.J(); ++j) {
        Vec y(m.d());
        for (int i = 0; i < m.d(); ++i) y[i] = u(rng);
        ys.push_back(y);
    }
    const Mat tau2 = fit_tau(m, ys);
    // interpolation conditions and commutation with the map
    const Mat M = m.matrix();
    CHECK((tau2 * M - M * tau2).norm() < 1e-8);
    for (int j = 0; j < m.J(); ++j) CHECK((tau2 * ys[j] - m.alpha(j)).norm() < 1e-9);

    CHECK_THROWS_AS((void)fit_tau(g, {Vec::Zero(1)}), Error);
}
