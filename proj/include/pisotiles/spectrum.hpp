#pragma once

// Eigenvalue criterion profiles, the constructed eigenvalue family, the
// tau/rho module fit and the weak-mixing probe.

#include <optional>
#include <string>
#include <vector>

#include "pisotiles/expansion.hpp"

namespace pisotiles {

struct ProfileThresholds {
    double decay_eps = 1e-3;   // final epsilon below this to call "decays"
    double rate_cap = 0.95;    // per-step multiplicative rate must stay below
    double stall_floor = 0.05; // min tail epsilon above this to call "stalls"
    double period_tol = 1e-9;  // exactness tolerance on translational periods
};

struct EigenvalueCandidate {
    Vec gamma;
    std::string provenance;  // "constructed(j,l,K)", "grid", "user", ...
};

struct DecayProfile {
    std::vector<double> eps;  // eps[n] = max over sampled Xi of dist(<phi^n x, gamma>, Z)
    double fitted_rate = 0.0; // per-step multiplicative rate over the tail
    enum class Verdict { Decays, Stalls, Inconclusive } verdict = Verdict::Inconclusive;
    bool truncated = false;   // profile stopped early on pairing overflow
    bool period_ok = true;    // exactness on the sampled periods
};

const char* to_string(DecayProfile::Verdict v);

DecayProfile criterion_profile(const ExpansionMap& phi, const std::vector<Vec>& xi_sample,
                               const std::vector<Vec>& period_sample, const Vec& gamma, int N,
                               const ProfileThresholds& thr = {});

struct FamilyResult {
    bool found = false;
    int K = -1;
    std::vector<EigenvalueCandidate> candidates;  // J*m members when found
    std::vector<DecayProfile> profiles;
    double basis_det = 0.0;  // d x d determinant of the candidate family
};

/// Screens (rho^T)^{-1} (phi^T)^{K+l} beta_j over K = 0..K_max and returns the
/// family at the minimal K where every member decays and the period condition
/// holds.  `found` is false when no K passes (the weak-mixing signature).
FamilyResult construct_family(const ExpansionMap& phi, const Mat& rho,
                              const std::vector<Vec>& xi_sample,
                              const std::vector<Vec>& period_sample, int K_max, int N,
                              const ProfileThresholds& thr = {});

struct RhoFit {
    Mat rho;
    long long denominator = 1;  // the common denominator b
    double worst_residual = 0.0;
};

/// Recovers rho = (1/b) tau^{-1} by expressing tau(xi) for sampled control
/// points in the Z[phi]-module generated by the alpha vectors.  Coefficients
/// are recovered by bounded-denominator reconstruction; enumeration covers
/// the module directions invisible to the physical embedding.
RhoFit fit_rho(const ExpansionMap& phi, const Mat& tau, const std::vector<Vec>& control_sample,
               long long denominator_bound = 64, int coeff_bound = 0, double tol = 1e-6);

/// Sum over non-selected conjugates of |gamma|^n: the theoretical decay bound.
double pisot_decay_bound(const IntPolynomial& poly, const std::vector<int>& selection, int n,
                         double precision = 1e-12);

struct ProbeEntry {
    EigenvalueCandidate candidate;
    DecayProfile profile;
};

struct WeakMixingReport {
    std::vector<ProbeEntry> entries;
    int decaying = 0;          // excluding gamma = 0
    bool consistent_with_weak_mixing = false;
};

WeakMixingReport weak_mixing_probe(const ExpansionMap& phi, const std::vector<Vec>& xi_sample,
                                   const std::vector<Vec>& period_sample,
                                   const std::vector<EigenvalueCandidate>& candidates, int N,
                                   const ProfileThresholds& thr = {});

/// Candidate lattice gamma in [lo, hi]^d with the given spacing.
std::vector<EigenvalueCandidate> grid_candidates(int d, double spacing, double lo, double hi);

/// Rank of the real span of the accepted wave vectors.
int accepted_rank(const std::vector<Vec>& accepted, int d, double tol = 1e-8);

}  // namespace pisotiles
