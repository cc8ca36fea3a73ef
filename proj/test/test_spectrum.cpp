#include <doctest.h>

#include <cmath>

#include "pisotiles/io.hpp"
#include "pisotiles/spectrum.hpp"
#include "pisotiles/tiling.hpp"

using namespace pisotiles;

namespace {

constexpr double kPhi = 1.6180339887498949;
constexpr double kPhiConj = -0.61803398874989485;

SubstitutionRule load(const char* name) {
    return rule_from_file(std::string(FIXTURE_DIR) + "/" + name);
}

/// Return vectors of a grown patch of the fixture, smallest norms first.
std::vector<Vec> xi_sample_for(const SubstitutionRule& rule, int k, double window,
                               size_t cap = 40) {
    TilingPatch patch = expand(rule, fixed_point_seed(rule).seed, k);
    attach_control_points(rule, patch);
    std::vector<Vec> xs = return_vectors(patch, window).vectors;
    if (xs.size() > cap) xs.resize(cap);
    return xs;
}

Vec scalar(double x) { return Vec::Constant(1, x); }

}  // namespace

TEST_CASE("gamma = 0 always passes") {
    const SubstitutionRule fib = load("fib.json");
    const auto xi = xi_sample_for(fib, 10, 30.0);
    const DecayProfile p = criterion_profile(fib.expansion, xi, {}, scalar(0.0), 25);
    REQUIRE(p.eps.size() == 26);
    for (double e : p.eps) CHECK(e == 0.0);
    CHECK(p.fitted_rate == 0.0);
    CHECK(p.verdict == DecayProfile::Verdict::Decays);
    CHECK_FALSE(p.truncated);
    CHECK(p.period_ok);
}

TEST_CASE("gamma = 1 decays on the golden rule at the conjugate rate") {
    const SubstitutionRule fib = load("fib.json");
    const auto xi = xi_sample_for(fib, 10, 30.0);
    const DecayProfile p = criterion_profile(fib.expansion, xi, {}, scalar(1.0), 25);
    CHECK(p.verdict == DecayProfile::Verdict::Decays);
    CHECK(p.fitted_rate == doctest::Approx(-kPhiConj).epsilon(0.02));

    // each sampled xi lies in the golden module p + q*phi; its conjugate
    // controls the profile: eps_n <= max |p + q*phi'| * |phi'|^n
    double C = 0.0;
    for (const Vec& x : xi) {
        bool resolved = false;
        for (int q = -200; q <= 200 && !resolved; ++q) {
            const double pc = std::nearbyint(x[0] - q * kPhi);
            if (std::abs(pc + q * kPhi - x[0]) < 1e-9) {
                C = std::max(C, std::abs(pc + q * kPhiConj));
                resolved = true;
            }
        }
        REQUIRE(resolved);
    }
    for (size_t n = 0; n < p.eps.size(); ++n)
        CHECK(p.eps[n] <= 1.001 * C * std::pow(-kPhiConj, static_cast<double>(n)) + 1e-9);
}

TEST_CASE("gamma = 1 stalls on the non-reciprocal cubic rule") {
    const SubstitutionRule np = load("nonpisot1d.json");
    const auto xi = xi_sample_for(np, 8, 30.0);
    const DecayProfile p = criterion_profile(np.expansion, xi, {}, scalar(1.0), 40);
    CHECK(p.verdict == DecayProfile::Verdict::Stalls);
    CHECK(p.fitted_rate > 0.9);
}

TEST_CASE("period exactness overrides the profile") {
    const SubstitutionRule fib = load("fib.json");
    const auto xi = xi_sample_for(fib, 10, 30.0);
    const DecayProfile p =
        criterion_profile(fib.expansion, xi, {scalar(1.0)}, scalar(0.5), 20);
    CHECK_FALSE(p.period_ok);
    CHECK(p.verdict == DecayProfile::Verdict::Stalls);

    // an exact period keeps the flag
    const DecayProfile q =
        criterion_profile(fib.expansion, xi, {scalar(1.0)}, scalar(2.0), 20);
    CHECK(q.period_ok);
}

TEST_CASE("profile input validation") {
    const SubstitutionRule fib = load("fib.json");
    const auto xi = xi_sample_for(fib, 8, 20.0);
    CHECK_THROWS_AS((void)criterion_profile(fib.expansion, {}, {}, scalar(1.0), 10), Error);
    CHECK_THROWS_AS(
        (void)criterion_profile(fib.expansion, xi, {}, scalar(std::nan("")), 10), Error);
    CHECK_THROWS_AS(
        (void)criterion_profile(fib.expansion, xi, {}, Vec::Zero(2), 10), Error);
}

TEST_CASE("long profiles use extended precision and stay untruncated") {
    const SubstitutionRule fib = load("fib.json");
    // exact module points: at N = 56 the pairing magnitude exceeds the
    // precision-escalation threshold, so the profile runs in quad arithmetic
    const std::vector<Vec> xi = {scalar(0.0), scalar(1.0),  scalar(kPhi),  scalar(1.0 + kPhi),
                                 scalar(-1.0), scalar(-kPhi), scalar(-1.0 - kPhi)};
    const DecayProfile p = criterion_profile(fib.expansion, xi, {}, scalar(1.0), 56);
    REQUIRE(p.eps.size() == 57);
    CHECK_FALSE(p.truncated);
    CHECK(p.eps[40] < 1e-3);  // still resolving genuine decay deep in the tail
    // the only residual error left is the double representation of the
    // expansion itself (~N * eps_phi * phi^N * |xi|); it stays far below the
    // stall floor, which pure double accumulation would not guarantee here
    CHECK(p.eps.back() < 0.05);
}

TEST_CASE("constructed family on the golden rule") {
    const SubstitutionRule fib = load("fib.json");
    const auto xi = xi_sample_for(fib, 10, 30.0);
    const Mat id = Mat::Identity(1, 1);

    const FamilyResult fam = construct_family(fib.expansion, id, xi, {}, 4, 25);
    REQUIRE(fam.found);
    CHECK(fam.K == 0);
    REQUIRE(fam.candidates.size() == 1);
    CHECK(fam.candidates[0].gamma[0] == doctest::Approx(1.0));
    CHECK(fam.basis_det == doctest::Approx(1.0));
    CHECK(fam.profiles[0].verdict == DecayProfile::Verdict::Decays);

    // scaling rho rescales the candidates by the inverse transpose
    const FamilyResult half = construct_family(fib.expansion, 2.0 * id, xi, {}, 0, 25);
    REQUIRE(half.candidates.size() == 1);
    CHECK(half.candidates[0].gamma[0] == doctest::Approx(0.5));

    Mat singular = Mat::Zero(1, 1);
    CHECK_THROWS_AS((void)construct_family(fib.expansion, singular, xi, {}, 1, 10), Error);
}

TEST_CASE("constructed family on the product of two golden rules") {
    const SubstitutionRule ff = load("fib_x_fib.json");
    TilingPatch patch = expand(ff, fixed_point_seed(ff).seed, 8);
    attach_control_points(ff, patch);
    std::vector<Vec> xi = return_vectors(patch, 15.0).vectors;
    if (xi.size() > 60) xi.resize(60);

    const FamilyResult fam = construct_family(ff.expansion, Mat::Identity(2, 2), xi, {}, 4, 25);
    REQUIRE(fam.found);
    CHECK(fam.K == 0);
    REQUIRE(fam.candidates.size() == 2);
    // with rho = I the family is exactly the beta vectors (m = 1, K = 0)
    const std::vector<Vec> betas = ff.expansion.beta_vectors();
    CHECK((fam.candidates[0].gamma - betas[0]).norm() < 1e-12);
    CHECK((fam.candidates[1].gamma - betas[1]).norm() < 1e-12);
    CHECK(std::abs(fam.basis_det) == doctest::Approx(1.0));
}

TEST_CASE("no K passes on the non-reciprocal cubic rule") {
    const SubstitutionRule np = load("nonpisot1d.json");
    const auto xi = xi_sample_for(np, 8, 30.0, 25);
    const FamilyResult fam =
        construct_family(np.expansion, Mat::Identity(1, 1), xi, {}, 10, 40);
    CHECK_FALSE(fam.found);
    CHECK(fam.K == 10);  // the last attempt is reported
    CHECK(fam.candidates.size() == 1);
    bool some_stall = false;
    for (const auto& p : fam.profiles)
        if (p.verdict != DecayProfile::Verdict::Decays) some_stall = true;
    CHECK(some_stall);
}

TEST_CASE("module denominator recovery") {
    const SubstitutionRule fib = load("fib.json");
    const ExpansionMap& g = fib.expansion;
    const Mat id = Mat::Identity(1, 1);

    const std::vector<Vec> sample = {scalar(0.0), scalar(1.0), scalar(kPhi),
                                     scalar(1.0 + kPhi)};
    const RhoFit fit = fit_rho(g, id, sample);
    CHECK(fit.denominator == 1);
    CHECK(fit.rho(0, 0) == doctest::Approx(1.0));
    CHECK(fit.worst_residual <= 1e-6);

    // scaling the points by 1/3 is detected as a common denominator of 3
    std::vector<Vec> thirds;
    for (const Vec& v : sample) thirds.push_back(v / 3.0);
    const RhoFit fit3 = fit_rho(g, id, thirds);
    CHECK(fit3.denominator == 3);
    CHECK(fit3.rho(0, 0) == doctest::Approx(1.0 / 3.0));

    // a point outside every bounded-denominator module copy is rejected
    CHECK_THROWS_AS((void)fit_rho(g, id, {scalar(0.2371678)}, 64), Error);
    CHECK_THROWS_AS((void)fit_rho(g, id, {}), Error);
    CHECK_THROWS_AS((void)fit_rho(g, Mat::Zero(1, 1), {scalar(1.0)}), Error);
}

TEST_CASE("theoretical decay bound") {
    std::vector<BigInt> c;
    for (long long v : {3LL, -4LL, -1LL, 1LL}) c.emplace_back(v);
    const IntPolynomial cubic(std::move(c));
    // single non-selected conjugate 0.71353...
    CHECK(pisot_decay_bound(cubic, {0, 1}, 0) == doctest::Approx(1.0));
    CHECK(pisot_decay_bound(cubic, {0, 1}, 10) ==
          doctest::Approx(std::pow(0.7135379349683995, 10)).epsilon(1e-9));

    std::vector<BigInt> gc;
    for (long long v : {-1LL, -1LL, 1LL}) gc.emplace_back(v);
    const IntPolynomial golden(std::move(gc));
    CHECK(pisot_decay_bound(golden, {0}, 20) ==
          doctest::Approx(std::pow(-kPhiConj, 20)).epsilon(1e-9));

    std::vector<BigInt> pc;
    for (long long v : {-3LL, -1LL, 0LL, 1LL}) pc.emplace_back(v);
    const IntPolynomial perron3(std::move(pc));
    CHECK_THROWS_AS((void)pisot_decay_bound(perron3, {0}, 5), Error);
}

TEST_CASE("weak-mixing probe counts nonzero decayers") {
    const SubstitutionRule fib = load("fib.json");
    const auto xi = xi_sample_for(fib, 10, 30.0);
    const std::vector<EigenvalueCandidate> cands = {
        {scalar(0.0), "grid"}, {scalar(1.0), "grid"}, {scalar(0.5), "grid"}};
    const WeakMixingReport rep = weak_mixing_probe(fib.expansion, xi, {}, cands, 25);
    REQUIRE(rep.entries.size() == 3);
    CHECK(rep.decaying == 1);  // only gamma = 1; gamma = 0 does not count
    CHECK_FALSE(rep.consistent_with_weak_mixing);

    const SubstitutionRule np = load("nonpisot1d.json");
    const auto xin = xi_sample_for(np, 8, 30.0, 25);
    const WeakMixingReport rn = weak_mixing_probe(np.expansion, xin, {}, cands, 40);
    CHECK(rn.decaying == 0);
    CHECK(rn.consistent_with_weak_mixing);
}

TEST_CASE("candidate grids") {
    const auto g1 = grid_candidates(1, 0.5, -1.0, 1.0);
    REQUIRE(g1.size() == 5);
    CHECK(g1.front().gamma[0] == doctest::Approx(-1.0));
    CHECK(g1.back().gamma[0] == doctest::Approx(1.0));

    const auto g2 = grid_candidates(2, 1.0, -1.0, 1.0);
    REQUIRE(g2.size() == 9);
    // last axis varies fastest
    CHECK(g2[0].gamma[0] == doctest::Approx(-1.0));
    CHECK(g2[0].gamma[1] == doctest::Approx(-1.0));
    CHECK(g2[1].gamma[0] == doctest::Approx(-1.0));
    CHECK(g2[1].gamma[1] == doctest::Approx(0.0));
    for (const auto& c : g2) CHECK(c.provenance == "grid");

    CHECK_THROWS_AS((void)grid_candidates(1, 0.0, -1.0, 1.0), Error);
    CHECK_THROWS_AS((void)grid_candidates(1, 0.5, 1.0, -1.0), Error);
}

TEST_CASE("rank of the accepted set") {
    Vec e1 = Vec::Zero(2), e2 = Vec::Zero(2);
    e1[0] = 1.0;
    e2[1] = 1.0;
    CHECK(accepted_rank({}, 2) == 0);
    CHECK(accepted_rank({Vec(Vec::Zero(2))}, 2) == 0);
    CHECK(accepted_rank({e1}, 2) == 1);
    CHECK(accepted_rank({e1, Vec(2.0 * e1)}, 2) == 1);
    CHECK(accepted_rank({e1, e2}, 2) == 2);
    CHECK(accepted_rank({e1, e2, Vec(e1 + e2)}, 2) == 2);
}
