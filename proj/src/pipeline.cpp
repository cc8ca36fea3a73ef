#include "pisotiles/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

namespace pisotiles {

namespace {

double max_cp_norm(const TilingPatch& patch) {
    double r = 0.0;
    if (patch.control_points)
        for (const Vec& c : *patch.control_points) r = std::max(r, c.norm());
    else
        for (const auto& tile : patch.tiles) r = std::max(r, tile.t.norm());
    return r;
}

std::string quant(const Vec& v) {
    std::string s;
    for (int i = 0; i < v.size(); ++i)
        s += std::to_string(static_cast<long long>(std::llround(v[i] * 1e9))) + ",";
    return s;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Yes: return "yes";
        case Verdict::No: return "no";
        default: return "undecidable";
    }
}

PreparedPatch prepare_patch(const SubstitutionRule& rule, std::size_t tile_cap, int target_tiles,
                            double min_reach) {
    PreparedPatch out;
    SeedResult sr = fixed_point_seed(rule);
    out.seed_power = sr.power;
    out.patch = sr.seed;
    attach_control_points(rule, out.patch);

    for (int k = 0; k < 64; ++k) {
        const bool enough = static_cast<int>(out.patch.tiles.size()) >= target_tiles &&
                            max_cp_norm(out.patch) >= min_reach;
        if (enough) break;
        TilingPatch next;
        try {
            next = expand(rule, out.patch, 1, tile_cap);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ResourceLimit) break;
            throw;
        }
        out.patch = std::move(next);
        out.k = k + 1;
        attach_control_points(rule, out.patch);
    }

    out.window = 0.45 * max_cp_norm(out.patch);
    if (out.window <= 0.0) throw Error(ErrorCode::Internal, "degenerate patch reach");
    out.xi = return_vectors(out.patch, out.window);
    out.periods_detected = periods(out.patch, std::min(out.window, 40.0));
    return out;
}

SpectrumSelection selection_for(const ExpansionMap& phi, double precision) {
    const RootSet rs = isolate_roots(phi.min_poly(), precision);
    std::set<int> picked;
    auto pick = [&](std::complex<double> z) {
        for (size_t i = 0; i < rs.roots.size(); ++i)
            if (std::abs(rs.roots[i].value - z) <= 1e-6 * (1.0 + std::abs(z))) {
                picked.insert(static_cast<int>(i));
                return;
            }
        throw Error(ErrorCode::Internal, "block eigenvalue not matched to a root");
    };
    for (double l : phi.real_blocks()) pick({l, 0.0});
    for (auto [a, b] : phi.complex_blocks()) {
        pick({a, b});
        pick({a, -b});
    }
    SpectrumSelection sel{phi.min_poly(), std::vector<int>(picked.begin(), picked.end()), phi.J()};
    return sel;
}

Json classify_report(const IntPolynomial& poly, std::vector<std::vector<int>> selections,
                     double precision) {
    const RootSet rs = isolate_roots(poly, precision);
    Json roots = Json::array();
    for (const auto& r : rs.roots)
        roots.push_back({{"im", r.value.imag()},
                         {"modulus", std::abs(r.value)},
                         {"radius", r.radius},
                         {"re", r.value.real()}});

    if (selections.empty()) {
        std::vector<int> outside;
        for (size_t i = 0; i < rs.roots.size(); ++i)
            if (std::abs(rs.roots[i].value) > 1.0) outside.push_back(static_cast<int>(i));
        if (!outside.empty()) selections.push_back(std::move(outside));
    }

    Json sel_json = Json::array();
    for (const auto& sel : selections) {
        Json e;
        e["selected"] = sel;
        e["pisot_family"] = to_string(is_pisot_family(rs, sel));
        sel_json.push_back(std::move(e));
    }

    Json out;
    out["degree"] = poly.degree();
    out["perron"] = is_perron_root(poly, precision);
    out["pisot_number"] = is_pisot_number(poly, precision);
    out["roots"] = roots;
    out["selections"] = sel_json;
    return out;
}

Json validation_to_json(const ValidationReport& rep) {
    Json out;
    out["valid"] = rep.valid;
    out["violations"] = rep.violations;
    return out;
}

Json run_spectrum(const SubstitutionRule& rule, const SpectrumOptions& opts) {
    const ValidationReport vrep = validate_rule(rule);
    if (!vrep.valid) throw Error(ErrorCode::InvalidRule, canonical_dump(validation_to_json(vrep)));

    const ExpansionMap& phi = rule.expansion;
    const int d = phi.d();
    Json errors = Json::array();
    auto record = [&errors](const char* stage, const Error& e) {
        errors.push_back(
            {{"code", exit_code_for(e.code())}, {"message", e.what()}, {"stage", stage}});
    };

    Json report;
    const SpectrumSelection sel = selection_for(phi, opts.precision);
    const Verdict pisot = is_pisot_family(sel, opts.precision);

    PreparedPatch pp = prepare_patch(rule, opts.tile_cap, opts.target_tiles);
    const std::vector<Vec>& xi_sample = pp.xi.vectors;
    // the exact condition applies to certified periods only; empirical
    // near-periods of a finite patch are reported but not enforced
    const std::vector<Vec> period_sample;

    report["patch"] = {{"generation", pp.k},
                       {"seed_power", pp.seed_power},
                       {"tiles", pp.patch.tiles.size()},
                       {"window", pp.window},
                       {"xi_count", xi_sample.size()}};
    report["periods_detected"] = pp.periods_detected.size();

    // tau: smallest-norm tuple of return vectors giving an independent basis
    std::optional<Mat> tau;
    {
        std::vector<Vec> cands;
        for (const Vec& v : xi_sample) {
            if (v.norm() == 0.0) continue;
            cands.push_back(v);
            if (cands.size() >= 24) break;
        }
        const int J = phi.J();
        std::vector<int> pick(J);
        for (int i = 0; i < J; ++i) pick[i] = i;
        while (!tau && static_cast<int>(cands.size()) >= J && pick[0] <= static_cast<int>(cands.size()) - J) {
            std::vector<Vec> ys;
            for (int i : pick) ys.push_back(cands[i]);
            try {
                tau = fit_tau(phi, ys, 1e-9);
            } catch (const Error&) {
                // advance the combination (lexicographic)
                int axis = J - 1;
                while (axis >= 0 && pick[axis] == static_cast<int>(cands.size()) - J + axis) --axis;
                if (axis < 0) break;
                ++pick[axis];
                for (int i = axis + 1; i < J; ++i) pick[i] = pick[i - 1] + 1;
            }
        }
        if (!tau)
            record("fit_tau", Error(ErrorCode::DegenerateBasis,
                                    "no independent return-vector tuple found"));
    }

    Mat rho;
    long long denominator = 1;
    bool have_rho = false, rho_fallback = false;
    if (tau) {
        report["tau"] = json_from_mat(*tau);
        std::vector<Vec> sample;
        {
            std::vector<Vec> cps = *pp.patch.control_points;
            std::sort(cps.begin(), cps.end(), [](const Vec& a, const Vec& b) {
                const double na = a.norm(), nb = b.norm();
                if (na != nb) return na < nb;
                for (int i = 0; i < a.size(); ++i)
                    if (a[i] != b[i]) return a[i] < b[i];
                return false;
            });
            std::set<std::string> seen;
            for (const Vec& c : cps) {
                if (c.norm() == 0.0 || !seen.insert(quant(c)).second) continue;
                sample.push_back(c);
                if (sample.size() >= 6) break;
            }
        }
        try {
            RhoFit rf = fit_rho(phi, *tau, sample);
            rho = rf.rho;
            denominator = rf.denominator;
            have_rho = true;
            report["rho_residual"] = rf.worst_residual;
        } catch (const Error& e) {
            record("fit_rho", e);
            Eigen::FullPivLU<Mat> lu(*tau);
            if (lu.isInvertible()) {
                rho = lu.inverse();
                have_rho = true;
                rho_fallback = true;
            }
        }
    }
    if (have_rho)
        report["rho"] = {{"denominator", denominator},
                         {"fallback", rho_fallback},
                         {"matrix", json_from_mat(rho)}};

    Json candidates = Json::array();
    std::vector<Vec> accepted;
    auto add_candidate = [&](const EigenvalueCandidate& c, const DecayProfile& p) {
        Json e;
        e["eps"] = p.eps;
        e["gamma"] = json_from_vec(c.gamma);
        e["provenance"] = c.provenance;
        e["rate"] = p.fitted_rate;
        e["truncated"] = p.truncated;
        e["verdict"] = to_string(p.verdict);
        candidates.push_back(std::move(e));
        if (p.verdict == DecayProfile::Verdict::Decays && c.gamma.norm() > 0.0)
            accepted.push_back(c.gamma);
    };

    FamilyResult family;
    if (have_rho) {
        try {
            family = construct_family(phi, rho, xi_sample, period_sample, opts.K_max, opts.N,
                                      opts.thresholds);
            for (size_t i = 0; i < family.candidates.size(); ++i)
                add_candidate(family.candidates[i], family.profiles[i]);
        } catch (const Error& e) {
            record("construct_family", e);
        }
    }
    report["constructed"] = {{"K", family.K},
                             {"basis_det", family.basis_det},
                             {"found", family.found}};

    for (const EigenvalueCandidate& c :
         grid_candidates(d, opts.grid_spacing, opts.grid_lo, opts.grid_hi)) {
        const DecayProfile p =
            criterion_profile(phi, xi_sample, period_sample, c.gamma, opts.N, opts.thresholds);
        add_candidate(c, p);
    }
    report["candidates"] = candidates;

    const int rank = accepted_rank(accepted, d);
    const bool rel_dense = rank == d;
    const bool wm_evidence = accepted.empty();
    report["rank"] = rank;
    report["relatively_dense"] = rel_dense;
    report["banner"] = {{"mixed_spectrum", rank > 0 && rank < d},
                        {"pisot_family", to_string(pisot)},
                        {"relatively_dense", rel_dense},
                        {"weak_mixing_evidence", wm_evidence}};

    if (pisot == Verdict::Yes) {
        std::vector<double> bound;
        for (int n = 0; n <= opts.N; ++n)
            bound.push_back(pisot_decay_bound(sel.poly, sel.selected, n, opts.precision));
        report["decay_bound"] = bound;
    }
    report["errors"] = errors;
    return report;
}

Json run_meyer(const SubstitutionRule& rule, const std::vector<double>& windows,
               std::size_t tile_cap) {
    const ValidationReport vrep = validate_rule(rule);
    if (!vrep.valid) throw Error(ErrorCode::InvalidRule, canonical_dump(validation_to_json(vrep)));
    if (windows.empty()) throw Error(ErrorCode::Parse, "need at least one window");
    for (double w : windows)
        if (!(w > 0.0)) throw Error(ErrorCode::Parse, "windows must be positive");

    std::vector<double> ws = windows;
    std::sort(ws.begin(), ws.end());
    const double reach = 1.5 * ws.back() + 5.0;

    PreparedPatch pp = prepare_patch(rule, tile_cap, 2, reach);

    Json gaps = Json::array();
    std::vector<double> ok_gaps;
    for (double w : ws) {
        Json e;
        e["window"] = w;
        try {
            const double g = meyer_gap(*pp.patch.control_points, w);
            e["gap"] = g;
            ok_gaps.push_back(g);
        } catch (const Error& err) {
            e["error"] = err.what();
        }
        gaps.push_back(std::move(e));
    }

    std::string trend = "inconclusive";
    if (ok_gaps.size() >= 2) {
        const double first = ok_gaps.front(), last = ok_gaps.back();
        const double hi = *std::max_element(ok_gaps.begin(), ok_gaps.end());
        const double lo = *std::min_element(ok_gaps.begin(), ok_gaps.end());
        if (last <= 0.5 * first)
            trend = "shrinking";
        else if (hi > 0.0 && (hi - lo) / hi < 0.10)
            trend = "stable";
    }

    Json out;
    out["gaps"] = gaps;
    out["trend"] = trend;
    return out;
}

}  // namespace pisotiles
