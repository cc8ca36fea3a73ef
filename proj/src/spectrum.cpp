#include "pisotiles/spectrum.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace pisotiles {

namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

template <typename F>
F dist_to_int(const F& x);

template <>
double dist_to_int<double>(const double& x) {
    const double d = std::abs(x - std::nearbyint(x));
    return std::min(d, 0.5);
}

template <>
Quad dist_to_int<Quad>(const Quad& x) {
    const Quad r = boost::multiprecision::abs(x - boost::multiprecision::round(x));
    return r > Quad(0.5) ? Quad(0.5) : r;
}

// One multiplication by phi, carried out blockwise in precision F.
template <typename F>
void apply_in_place(const ExpansionMap& phi, std::vector<F>& x) {
    const int s = phi.s(), t = phi.t(), J = phi.J(), m = phi.m();
    for (int j = 0; j < J; ++j) {
        int off = j * m;
        for (int k = 0; k < s; ++k, ++off) x[off] *= F(phi.real_blocks()[k]);
        for (int k = 0; k < t; ++k, off += 2) {
            const F a(phi.complex_blocks()[k].first), b(phi.complex_blocks()[k].second);
            const F u = x[off], v = x[off + 1];
            x[off] = a * u - b * v;
            x[off + 1] = b * u + a * v;
        }
    }
}

template <typename F>
std::vector<double> profile_eps(const ExpansionMap& phi, const std::vector<Vec>& xi,
                                const Vec& gamma, int N, bool* truncated) {
    const int d = phi.d();
    const F overflow_cap = std::is_same_v<F, double> ? F(9.007199254740992e15) : F(1e30);
    std::vector<std::vector<F>> state;
    state.reserve(xi.size());
    for (const Vec& x : xi) {
        std::vector<F> v(d);
        for (int i = 0; i < d; ++i) v[i] = F(x[i]);
        state.push_back(std::move(v));
    }
    std::vector<F> g(d);
    for (int i = 0; i < d; ++i) g[i] = F(gamma[i]);

    std::vector<double> eps;
    for (int n = 0; n <= N; ++n) {
        F worst(0);
        bool overflow = false;
        for (const auto& x : state) {
            F pairing(0);
            for (int i = 0; i < d; ++i) pairing += x[i] * g[i];
            using boost::multiprecision::abs;
            using std::abs;
            if (abs(pairing) > overflow_cap) {
                overflow = true;
                break;
            }
            const F dist = dist_to_int<F>(pairing);
            if (dist > worst) worst = dist;
        }
        if (overflow) {
            *truncated = true;
            break;
        }
        eps.push_back(static_cast<double>(worst));
        if (n < N)
            for (auto& x : state) apply_in_place(phi, x);
    }
    return eps;
}

double fit_tail_rate(const std::vector<double>& eps) {
    const int n = static_cast<int>(eps.size());
    if (n < 3) return 1.0;
    const int start = std::max(1, n / 2);
    bool all_tiny = true;
    for (int i = start; i < n; ++i)
        if (eps[i] > 1e-14) all_tiny = false;
    if (all_tiny) return 0.0;

    // least-squares slope of log(eps) over the tail
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (int i = start; i < n; ++i) {
        const double y = std::log(std::max(eps[i], 1e-300));
        sx += i;
        sy += y;
        sxx += static_cast<double>(i) * i;
        sxy += i * y;
        ++count;
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) return 1.0;
    const double slope = (count * sxy - sx * sy) / denom;
    return std::exp(slope);
}

}  // namespace

const char* to_string(DecayProfile::Verdict v) {
    switch (v) {
        case DecayProfile::Verdict::Decays: return "decays";
        case DecayProfile::Verdict::Stalls: return "stalls";
        default: return "inconclusive";
    }
}

DecayProfile criterion_profile(const ExpansionMap& phi, const std::vector<Vec>& xi_sample,
                               const std::vector<Vec>& period_sample, const Vec& gamma, int N,
                               const ProfileThresholds& thr) {
    if (xi_sample.empty())
        throw Error(ErrorCode::Parse, "criterion profile needs a non-empty return-vector sample");
    if (gamma.size() != phi.d())
        throw Error(ErrorCode::DimensionMismatch, "wave vector dimension mismatch");
    for (int i = 0; i < gamma.size(); ++i)
        if (!std::isfinite(gamma[i]))
            throw Error(ErrorCode::NonFinite, "wave vector must be finite");

    DecayProfile out;

    // exactness on translational periods
    for (const Vec& p : period_sample)
        if (dist_to_int<double>(p.dot(gamma)) > thr.period_tol) out.period_ok = false;

    double max_norm = 0.0;
    for (const Vec& x : xi_sample) max_norm = std::max(max_norm, x.norm());
    const double growth =
        std::pow(phi.max_modulus(), N) * std::max(max_norm, 1.0) * std::max(gamma.norm(), 1.0);
    // switch to software quads once accumulated double rounding (~N*eps*value)
    // could move dist-to-integer by more than ~1e-2
    const bool need_quad = growth > 1.099511627776e12;  // 2^40

    if (need_quad)
        out.eps = profile_eps<Quad>(phi, xi_sample, gamma, N, &out.truncated);
    else
        out.eps = profile_eps<double>(phi, xi_sample, gamma, N, &out.truncated);

    out.fitted_rate = fit_tail_rate(out.eps);

    if (!out.period_ok || out.eps.empty()) {
        out.verdict = DecayProfile::Verdict::Stalls;
        return out;
    }
    const int n = static_cast<int>(out.eps.size());
    double tail_min = std::numeric_limits<double>::infinity();
    for (int i = std::max(1, n / 2); i < n; ++i) tail_min = std::min(tail_min, out.eps[i]);
    if (out.eps.back() < thr.decay_eps && out.fitted_rate < thr.rate_cap && !out.truncated)
        out.verdict = DecayProfile::Verdict::Decays;
    else if (tail_min > thr.stall_floor || out.truncated)
        out.verdict = DecayProfile::Verdict::Stalls;
    else
        out.verdict = DecayProfile::Verdict::Inconclusive;
    return out;
}

FamilyResult construct_family(const ExpansionMap& phi, const Mat& rho,
                              const std::vector<Vec>& xi_sample,
                              const std::vector<Vec>& period_sample, int K_max, int N,
                              const ProfileThresholds& thr) {
    const int d = phi.d(), m = phi.m(), J = phi.J();
    Eigen::FullPivLU<Mat> lu(rho.transpose());
    if (!lu.isInvertible()) throw Error(ErrorCode::DegenerateBasis, "rho is not invertible");
    const Mat rhoT_inv = lu.inverse();

    const std::vector<Vec> betas = phi.beta_vectors();
    FamilyResult best;
    for (int K = 0; K <= K_max; ++K) {
        FamilyResult attempt;
        attempt.K = K;
        bool all_decay = true;
        for (int j = 0; j < J; ++j) {
            Vec w = betas[j];
            for (int p = 0; p < K; ++p) w = phi.apply_transpose(w);
            for (int l = 0; l < m; ++l) {
                const Vec gamma = rhoT_inv * w;
                EigenvalueCandidate cand;
                cand.gamma = gamma;
                cand.provenance = "constructed(j=" + std::to_string(j + 1) +
                                  ",l=" + std::to_string(l) + ",K=" + std::to_string(K) + ")";
                DecayProfile prof = criterion_profile(phi, xi_sample, period_sample, gamma, N, thr);
                if (prof.verdict != DecayProfile::Verdict::Decays) all_decay = false;
                attempt.candidates.push_back(std::move(cand));
                attempt.profiles.push_back(std::move(prof));
                w = phi.apply_transpose(w);
            }
        }
        if (all_decay) {
            Mat B(d, d);
            for (int c = 0; c < d; ++c) B.col(c) = attempt.candidates[c].gamma;
            attempt.basis_det = B.determinant();
            attempt.found = true;
            return attempt;
        }
        if (K == K_max) best = std::move(attempt);  // keep the last attempt for reporting
    }
    best.found = false;
    return best;
}

RhoFit fit_rho(const ExpansionMap& phi, const Mat& tau, const std::vector<Vec>& control_sample,
               long long denominator_bound, int coeff_bound, double tol) {
    const int m = phi.m(), J = phi.J();
    const int D = phi.min_poly().degree();
    const int free_dims = D - m;
    if (free_dims < 0)
        throw Error(ErrorCode::ReconstructionFailed, "minimal polynomial degree below block size");
    if (free_dims > 3)
        throw Error(ErrorCode::ReconstructionFailed,
                    "module codimension too large for coefficient enumeration");
    if (control_sample.empty())
        throw Error(ErrorCode::ReconstructionFailed, "no control points sampled");

    // generators psi^k alpha restricted to one H_j block (identical across j)
    std::vector<Vec> gen(D);
    {
        Vec a = phi.alpha(0);
        for (int k = 0; k < D; ++k) {
            gen[k] = a.segment(0, m);
            a = phi.apply(a);
        }
    }
    Mat pivot(m, m);
    for (int k = 0; k < m; ++k) pivot.col(k) = gen[k];
    const Mat pivot_inv = pivot.inverse();

    // enumeration bound for the coefficients invisible to the embedding
    double max_norm = 0.0;
    for (const Vec& xi : control_sample) max_norm = std::max(max_norm, (tau * xi).norm());
    int B = coeff_bound > 0
                ? coeff_bound
                : std::clamp(static_cast<int>(std::ceil(2.0 * max_norm)) + 3, 8, 40);

    long long b = 1;
    double worst = 0.0;
    for (const Vec& xi : control_sample) {
        const Vec y = tau * xi;
        for (int j = 0; j < J; ++j) {
            const Vec yj = y.segment(j * m, m);
            long long q_found = -1;
            for (long long q = 1; q <= denominator_bound; ++q) {
                const Vec target = static_cast<double>(q) * yj;
                // enumerate the free coefficients, solve the pivot block,
                // round, and measure the residual
                double best_res = std::numeric_limits<double>::infinity();
                double second_res = std::numeric_limits<double>::infinity();
                std::vector<int> c_free(free_dims, -B);
                bool done = free_dims == 0;
                bool first_pass = true;
                while (first_pass || !done) {
                    first_pass = false;
                    Vec rem = target;
                    for (int f = 0; f < free_dims; ++f) rem -= c_free[f] * gen[m + f];
                    const Vec c_piv = pivot_inv * rem;
                    Vec rounded(m);
                    for (int i = 0; i < m; ++i) rounded[i] = std::nearbyint(c_piv[i]);
                    const double res = (pivot * (c_piv - rounded)).norm();
                    if (res < best_res) {
                        second_res = best_res;
                        best_res = res;
                    } else if (res < second_res) {
                        second_res = res;
                    }
                    if (free_dims == 0) break;
                    int axis = 0;
                    while (axis < free_dims && c_free[axis] == B) c_free[axis++] = -B;
                    if (axis == free_dims) { done = true; continue; }
                    ++c_free[axis];
                }
                if (best_res <= tol && (free_dims == 0 || second_res > 5.0 * tol)) {
                    q_found = q;
                    worst = std::max(worst, best_res);
                    break;
                }
            }
            if (q_found < 0)
                throw Error(ErrorCode::ReconstructionFailed,
                            "a sampled control point is not a bounded-denominator module point");
            b = std::lcm(b, q_found);
        }
    }

    RhoFit out;
    out.denominator = b;
    out.worst_residual = worst;
    Eigen::FullPivLU<Mat> lu(tau);
    if (!lu.isInvertible()) throw Error(ErrorCode::DegenerateBasis, "tau is not invertible");
    out.rho = lu.inverse() / static_cast<double>(b);
    return out;
}

double pisot_decay_bound(const IntPolynomial& poly, const std::vector<int>& selection, int n,
                         double precision) {
    const RootSet rs = isolate_roots(poly, precision);
    if (is_pisot_family(rs, selection) != Verdict::Yes)
        throw Error(ErrorCode::NotPisotFamily, "selection is not a certified Pisot family");
    std::vector<bool> in_sel(rs.roots.size(), false);
    for (int i : selection) in_sel[i] = true;
    double bound = 0.0;
    for (size_t i = 0; i < rs.roots.size(); ++i)
        if (!in_sel[i]) bound += std::pow(std::abs(rs.roots[i].value) + rs.roots[i].radius, n);
    return bound;
}

WeakMixingReport weak_mixing_probe(const ExpansionMap& phi, const std::vector<Vec>& xi_sample,
                                   const std::vector<Vec>& period_sample,
                                   const std::vector<EigenvalueCandidate>& candidates, int N,
                                   const ProfileThresholds& thr) {
    WeakMixingReport out;
    for (const auto& cand : candidates) {
        ProbeEntry entry;
        entry.candidate = cand;
        entry.profile = criterion_profile(phi, xi_sample, period_sample, cand.gamma, N, thr);
        if (entry.profile.verdict == DecayProfile::Verdict::Decays && cand.gamma.norm() > 0.0)
            ++out.decaying;
        out.entries.push_back(std::move(entry));
    }
    out.consistent_with_weak_mixing = out.decaying == 0;
    return out;
}

std::vector<EigenvalueCandidate> grid_candidates(int d, double spacing, double lo, double hi) {
    if (spacing <= 0.0 || hi < lo) throw Error(ErrorCode::Parse, "bad grid parameters");
    const int per_axis = static_cast<int>(std::floor((hi - lo) / spacing + 1e-9)) + 1;
    std::vector<EigenvalueCandidate> out;
    std::vector<int> idx(d, 0);
    while (true) {
        Vec g(d);
        for (int i = 0; i < d; ++i) g[i] = lo + idx[i] * spacing;
        out.push_back({g, "grid"});
        int axis = d - 1;
        while (axis >= 0 && idx[axis] == per_axis - 1) idx[axis--] = 0;
        if (axis < 0) break;
        ++idx[axis];
    }
    return out;
}

int accepted_rank(const std::vector<Vec>& accepted, int d, double tol) {
    if (accepted.empty()) return 0;
    Mat M(d, static_cast<int>(accepted.size()));
    for (size_t i = 0; i < accepted.size(); ++i) M.col(static_cast<int>(i)) = accepted[i];
    Eigen::JacobiSVD<Mat> svd(M);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol * sv[0]) ++rank;
    return rank;
}

}  // namespace pisotiles
