#include "pisotiles/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <unordered_map>

namespace pisotiles {

double Box::volume() const {
    double v = 1.0;
    for (const auto& [lo, hi] : iv) v *= hi - lo;
    return v;
}

Box Box::translate(const Vec& v) const {
    if (v.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "translation dimension mismatch");
    Box out = *this;
    for (int i = 0; i < dim(); ++i) {
        out.iv[i][0] += v[i];
        out.iv[i][1] += v[i];
    }
    return out;
}

Box Box::scale_axes(const std::vector<double>& factors) const {
    if (static_cast<int>(factors.size()) != dim())
        throw Error(ErrorCode::DimensionMismatch, "scale dimension mismatch");
    Box out = *this;
    for (int i = 0; i < dim(); ++i) {
        const double a = iv[i][0] * factors[i], b = iv[i][1] * factors[i];
        out.iv[i] = {std::min(a, b), std::max(a, b)};
    }
    return out;
}

bool Box::contains(const Box& inner, double tol) const {
    if (inner.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i)
        if (inner.iv[i][0] < iv[i][0] - tol || inner.iv[i][1] > iv[i][1] + tol) return false;
    return true;
}

bool Box::interior_intersects(const Box& other, double tol) const {
    if (other.dim() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
        const double lo = std::max(iv[i][0], other.iv[i][0]);
        const double hi = std::min(iv[i][1], other.iv[i][1]);
        if (hi - lo <= tol) return false;
    }
    return true;
}

Box Box::product(const Box& a, const Box& b) {
    Box out = a;
    out.iv.insert(out.iv.end(), b.iv.begin(), b.iv.end());
    return out;
}

std::vector<std::pair<int, Vec>> SubstitutionRule::children_of(int j) const {
    std::vector<std::pair<int, Vec>> out;
    for (int i = 0; i < num_types(); ++i)
        for (const Vec& u : digits[i][j]) out.emplace_back(i, u);
    return out;
}

Eigen::MatrixXi substitution_matrix(const SubstitutionRule& rule) {
    const int k = rule.num_types();
    Eigen::MatrixXi M(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) M(i, j) = static_cast<int>(rule.digits[i][j].size());
    return M;
}

bool is_primitive(const Eigen::MatrixXi& M) {
    const int k = static_cast<int>(M.rows());
    using BMat = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
    BMat A(k, k), P(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) A(i, j) = P(i, j) = M(i, j) > 0;
    const int wielandt = k * k - 2 * k + 2;  // power bound for primitivity
    for (int n = 1; n <= std::max(wielandt, 1); ++n) {
        if (P.all()) return true;
        BMat Q = BMat::Constant(k, k, false);
        for (int i = 0; i < k; ++i)
            for (int l = 0; l < k; ++l)
                if (P(i, l))
                    for (int j = 0; j < k; ++j) Q(i, j) = Q(i, j) || A(l, j);
        P = Q;
    }
    return P.all();
}

namespace {

std::vector<double> diagonal_factors(const ExpansionMap& e) {
    std::vector<double> f;
    for (int j = 0; j < e.J(); ++j)
        for (double l : e.real_blocks()) f.push_back(l);
    return f;
}

}  // namespace

ValidationReport validate_rule(const SubstitutionRule& rule) {
    ValidationReport rep;
    auto fail = [&rep](std::string msg) {
        rep.valid = false;
        rep.violations.push_back(std::move(msg));
    };

    const int k = rule.num_types();
    const int d = rule.expansion.d();
    if (k == 0) {
        fail("rule has no prototiles");
        return rep;
    }
    for (int j = 0; j < k; ++j) {
        if (rule.prototiles[j].label != j + 1) fail("prototile labels must be 1..kappa in order");
        if (rule.prototiles[j].support.dim() != d) fail("prototile support dimension mismatch");
        if (rule.prototiles[j].support.volume() <= 0.0) fail("prototile support has no volume");
    }
    if (static_cast<int>(rule.digits.size()) != k) fail("digit table has wrong row count");
    if (!rep.valid) return rep;
    for (int i = 0; i < k; ++i)
        if (static_cast<int>(rule.digits[i].size()) != k) fail("digit table has wrong column count");
    if (!rep.valid) return rep;

    if (!rule.expansion.is_diagonal()) {
        fail("complex expansion blocks are not supported with box prototiles");
        return rep;
    }
    const std::vector<double> diag = diagonal_factors(rule.expansion);

    const double det = rule.expansion.det_abs();
    for (int j = 0; j < k; ++j) {
        const Box inflated = rule.prototiles[j].support.scale_axes(diag);

        double child_volume = 0.0;
        std::vector<Box> child_boxes;
        for (const auto& [i, u] : rule.children_of(j)) {
            Box cb = rule.prototiles[i].support.translate(u);
            child_volume += cb.volume();
            if (!inflated.contains(cb, 1e-9 * (1.0 + std::abs(det)))) {
                std::ostringstream os;
                os << "child of type " << (i + 1) << " escapes the inflated type-" << (j + 1)
                   << " tile";
                fail(os.str());
            }
            child_boxes.push_back(std::move(cb));
        }
        const double target = det * rule.prototiles[j].support.volume();
        if (std::abs(child_volume - target) > 1e-9 * std::max(1.0, std::abs(target))) {
            std::ostringstream os;
            os << "volume identity fails for type " << (j + 1) << ": " << child_volume
               << " vs " << target;
            fail(os.str());
        }
        for (size_t a = 0; a < child_boxes.size(); ++a)
            for (size_t b = a + 1; b < child_boxes.size(); ++b)
                if (child_boxes[a].interior_intersects(child_boxes[b], 1e-9)) {
                    std::ostringstream os;
                    os << "children " << a << " and " << b << " of type " << (j + 1)
                       << " overlap";
                    fail(os.str());
                }
        if (child_boxes.empty()) fail("a prototile has no children");
    }

    if (static_cast<int>(rule.tile_map.size()) != k) {
        fail("tile_map must have one entry per type");
    } else {
        for (int j = 0; j < k; ++j) {
            const auto ch = rule.children_of(j);
            if (rule.tile_map[j] < 0 || rule.tile_map[j] >= static_cast<int>(ch.size()))
                fail("tile_map index out of range");
        }
    }
    return rep;
}

TilingPatch expand(const SubstitutionRule& rule, const TilingPatch& patch, int k,
                   std::size_t tile_cap) {
    if (k < 0) throw Error(ErrorCode::Parse, "expansion count must be non-negative");
    TilingPatch cur = patch;
    cur.control_points.reset();
    for (int step = 0; step < k; ++step) {
        TilingPatch next;
        next.generation = cur.generation + 1;
        std::size_t predicted = 0;
        for (const auto& tile : cur.tiles)
            predicted += rule.children_of(tile.label - 1).size();
        if (predicted > tile_cap)
            throw Error(ErrorCode::ResourceLimit, "tile cap exceeded during expansion");
        next.tiles.reserve(predicted);
        for (const auto& tile : cur.tiles) {
            const Vec base = rule.expansion.apply(tile.t);
            for (const auto& [i, u] : rule.children_of(tile.label - 1))
                next.tiles.push_back({i + 1, base + u});
        }
        cur = std::move(next);
    }
    return cur;
}

SeedResult fixed_point_seed(const SubstitutionRule& rule, int max_power) {
    const int k = rule.num_types();
    if (max_power <= 0) {
        std::size_t max_children = 1;
        for (int j = 0; j < k; ++j)
            max_children = std::max(max_children, rule.children_of(j).size());
        max_power = static_cast<int>(k * max_children);
    }
    const Mat phi = rule.expansion.matrix();
    const int d = rule.expansion.d();
    const std::vector<double> diag =
        rule.expansion.is_diagonal() ? diagonal_factors(rule.expansion) : std::vector<double>{};

    for (int p = 1; p <= max_power; ++p) {
        Mat phi_p = Mat::Identity(d, d);
        for (int i = 0; i < p; ++i) phi_p = phi * phi_p;
        for (int j = 0; j < k; ++j) {
            TilingPatch unit;
            unit.tiles.push_back({j + 1, Vec::Zero(d)});
            TilingPatch grown = expand(rule, unit, p);
            for (const auto& tile : grown.tiles) {
                if (tile.label != j + 1) continue;
                // parent at x has this child at phi^p x + v; fixed when
                // x = (I - phi^p)^{-1} v
                const Vec x = (Mat::Identity(d, d) - phi_p).partialPivLu().solve(tile.t);
                if (!diag.empty()) {
                    std::vector<double> diag_p(diag);
                    for (auto& f : diag_p) f = std::pow(f, p);
                    const Box placed = rule.prototiles[j].support.translate(x);
                    if (!placed.scale_axes(diag_p).contains(placed, 1e-9)) continue;
                }
                SeedResult out;
                out.seed.tiles.push_back({j + 1, x});
                out.power = p;
                return out;
            }
        }
    }
    throw Error(ErrorCode::NoSeedFound, "no nesting seed found within the search depth");
}

std::vector<Vec> control_point_offsets(const SubstitutionRule& rule) {
    const int k = rule.num_types();
    const int d = rule.expansion.d();
    std::vector<int> child_type(k);
    std::vector<Vec> child_digit(k);
    for (int j = 0; j < k; ++j) {
        const auto ch = rule.children_of(j);
        const auto& [i, u] = ch.at(rule.tile_map.at(j));
        child_type[j] = i;
        child_digit[j] = u;
    }
    std::vector<Vec> x(k, Vec::Zero(d));
    for (int it = 0; it < 2000; ++it) {
        double delta = 0.0;
        std::vector<Vec> nx(k);
        for (int j = 0; j < k; ++j) {
            nx[j] = rule.expansion.apply_inverse(child_digit[j] + x[child_type[j]]);
            delta = std::max(delta, rule.expansion.block_norm(nx[j] - x[j]));
        }
        x = std::move(nx);
        if (delta < 1e-13) break;
    }
    return x;
}

void attach_control_points(const SubstitutionRule& rule, TilingPatch& patch) {
    const std::vector<Vec> off = control_point_offsets(rule);
    std::vector<Vec> cps;
    cps.reserve(patch.tiles.size());
    for (const auto& tile : patch.tiles) cps.push_back(tile.t + off[tile.label - 1]);
    patch.control_points = std::move(cps);
}

namespace {

std::string quantize_key(const Vec& v, double q = 1e-9) {
    std::ostringstream os;
    for (int i = 0; i < v.size(); ++i) {
        const long long cell = static_cast<long long>(std::llround(v[i] / q));
        os << cell << ",";
    }
    return os.str();
}

}  // namespace

ReturnVectorSet return_vectors(const TilingPatch& patch, double window, std::size_t cap) {
    if (!patch.control_points)
        throw Error(ErrorCode::Internal, "return_vectors needs control points");
    const auto& cps = *patch.control_points;
    if (patch.tiles.empty()) throw Error(ErrorCode::Internal, "empty patch");
    const int d = static_cast<int>(cps.front().size());

    int max_label = 0;
    for (const auto& tile : patch.tiles) max_label = std::max(max_label, tile.label);
    std::vector<std::vector<Vec>> per_type(max_label);
    for (size_t i = 0; i < patch.tiles.size(); ++i)
        if (cps[i].norm() <= window) per_type[patch.tiles[i].label - 1].push_back(cps[i]);
    // bound the pairwise work
    for (auto& pts : per_type) {
        if (pts.size() > 4000) {
            std::sort(pts.begin(), pts.end(),
                      [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
            pts.resize(4000);
        }
    }

    ReturnVectorSet out;
    out.window = window;
    out.by_type.resize(max_label);
    std::set<std::string> seen;
    auto push = [&](std::vector<Vec>& dst, const Vec& v, std::set<std::string>& dedup) {
        const std::string key = quantize_key(v);
        if (dedup.insert(key).second) dst.push_back(v);
    };
    std::set<std::string> global;
    push(out.vectors, Vec::Zero(d), global);
    for (int type = 0; type < max_label; ++type) {
        std::set<std::string> local;
        push(out.by_type[type], Vec::Zero(d), local);
        const auto& pts = per_type[type];
        for (size_t a = 0; a < pts.size(); ++a)
            for (size_t b = 0; b < pts.size(); ++b) {
                if (a == b) continue;
                const Vec diff = pts[a] - pts[b];
                push(out.by_type[type], diff, local);
                push(out.vectors, diff, global);
            }
    }
    std::sort(out.vectors.begin(), out.vectors.end(), [](const Vec& a, const Vec& b) {
        const double na = a.norm(), nb = b.norm();
        if (na != nb) return na < nb;
        for (int i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    if (out.vectors.size() > cap) out.vectors.resize(cap);
    return out;
}

namespace {

class TileIndex {
public:
    explicit TileIndex(const TilingPatch& patch, double q = 1e-6) : q_(q) {
        for (const auto& tile : patch.tiles)
            cells_[cell_key(tile.t)].push_back({tile.label, tile.t});
    }

    bool has(int label, const Vec& t, double tol = 1e-6) const {
        // search this cell and neighbors (quantization boundary)
        std::vector<long long> base(t.size());
        for (int i = 0; i < t.size(); ++i) base[i] = static_cast<long long>(std::llround(t[i] / q_));
        std::vector<int> offsets(t.size(), -1);
        while (true) {
            std::ostringstream os;
            for (int i = 0; i < t.size(); ++i) os << base[i] + offsets[i] << ",";
            auto it = cells_.find(os.str());
            if (it != cells_.end())
                for (const auto& [lab, pos] : it->second)
                    if (lab == label && (pos - t).norm() <= tol) return true;
            int axis = 0;
            while (axis < static_cast<int>(offsets.size()) && offsets[axis] == 1)
                offsets[axis++] = -1;
            if (axis == static_cast<int>(offsets.size())) return false;
            ++offsets[axis];
        }
    }

private:
    std::string cell_key(const Vec& v) const {
        std::ostringstream os;
        for (int i = 0; i < v.size(); ++i)
            os << static_cast<long long>(std::llround(v[i] / q_)) << ",";
        return os.str();
    }
    double q_;
    std::unordered_map<std::string, std::vector<std::pair<int, Vec>>> cells_;
};

}  // namespace

std::vector<Vec> periods(const TilingPatch& patch, double window) {
    if (!patch.control_points) throw Error(ErrorCode::Internal, "periods needs control points");
    ReturnVectorSet xi = return_vectors(patch, window / 2.0, 2000);
    TileIndex index(patch);

    std::vector<Vec> found;
    for (const Vec& v : xi.vectors) {
        if (v.norm() == 0.0) continue;
        bool ok = true;
        int checked = 0;
        for (const auto& tile : patch.tiles) {
            if (tile.t.norm() > window - v.norm()) continue;
            ++checked;
            if (!index.has(tile.label, tile.t + v)) {
                ok = false;
                break;
            }
        }
        if (ok && checked > 0) found.push_back(v);
    }
    return found;
}

int flc_census(const TilingPatch& patch, double R) {
    if (!patch.control_points) throw Error(ErrorCode::Internal, "flc_census needs control points");
    if (patch.tiles.empty()) throw Error(ErrorCode::Internal, "empty patch");
    const int d = static_cast<int>(patch.tiles.front().t.size());

    // bounding box of tile translations
    Vec lo = patch.tiles.front().t, hi = patch.tiles.front().t;
    for (const auto& tile : patch.tiles) {
        lo = lo.cwiseMin(tile.t);
        hi = hi.cwiseMax(tile.t);
    }
    const double half_extent = (hi - lo).minCoeff() / 2.0;
    if (half_extent < 3.0 * R)
        throw Error(ErrorCode::WindowTooSmall, "patch too small for the requested radius");

    std::set<std::string> classes;
    const auto& cps = *patch.control_points;
    for (size_t c = 0; c < cps.size(); ++c) {
        bool interior = true;
        for (int i = 0; i < d; ++i)
            if (cps[c][i] - R < lo[i] || cps[c][i] + R > hi[i]) interior = false;
        if (!interior) continue;
        std::vector<std::string> members;
        for (size_t i = 0; i < patch.tiles.size(); ++i) {
            if ((cps[i] - cps[c]).norm() > R) continue;
            std::ostringstream os;
            os << patch.tiles[i].label << ":" << quantize_key(patch.tiles[i].t - cps[c], 1e-6);
            members.push_back(os.str());
        }
        std::sort(members.begin(), members.end());
        std::ostringstream os;
        for (const auto& m : members) os << m << ";";
        classes.insert(os.str());
    }
    if (classes.empty()) throw Error(ErrorCode::WindowTooSmall, "no interior sample centers");
    return static_cast<int>(classes.size());
}

double meyer_gap(const std::vector<Vec>& points, double window) {
    std::vector<Vec> pts;
    for (const Vec& p : points)
        if (p.norm() <= window) pts.push_back(p);
    if (pts.size() < 2) throw Error(ErrorCode::WindowTooSmall, "fewer than two points in window");
    if (pts.size() > 4000) {
        std::sort(pts.begin(), pts.end(),
                  [](const Vec& a, const Vec& b) { return a.norm() < b.norm(); });
        pts.resize(4000);
    }

    std::vector<Vec> diffs;
    std::set<std::string> seen;
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = 0; b < pts.size(); ++b) {
            if (a == b) continue;
            const Vec v = pts[a] - pts[b];
            if (seen.insert(quantize_key(v)).second) diffs.push_back(v);
        }
    diffs.push_back(Vec::Zero(pts.front().size()));

    std::sort(diffs.begin(), diffs.end(), [](const Vec& a, const Vec& b) {
        for (int i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < diffs.size(); ++i)
        for (size_t j = i + 1; j < diffs.size(); ++j) {
            if (diffs[j][0] - diffs[i][0] >= best) break;  // sorted on first coordinate
            best = std::min(best, (diffs[j] - diffs[i]).norm());
        }
    return best;
}

SubstitutionRule direct_product(const SubstitutionRule& a, const SubstitutionRule& b) {
    const int ka = a.num_types(), kb = b.num_types();

    // joined expansion map
    std::optional<ExpansionMap> joined;
    if (a.expansion.real_blocks() == b.expansion.real_blocks() &&
        a.expansion.complex_blocks() == b.expansion.complex_blocks() &&
        a.expansion.min_poly() == b.expansion.min_poly()) {
        joined.emplace(a.expansion.real_blocks(), a.expansion.complex_blocks(),
                       a.expansion.J() + b.expansion.J(), a.expansion.min_poly());
    } else if (a.expansion.J() == 1 && b.expansion.J() == 1 && a.expansion.is_diagonal() &&
               b.expansion.is_diagonal()) {
        std::vector<double> reals = a.expansion.real_blocks();
        reals.insert(reals.end(), b.expansion.real_blocks().begin(),
                     b.expansion.real_blocks().end());
        const IntPolynomial mp = (a.expansion.min_poly() == b.expansion.min_poly())
                                     ? a.expansion.min_poly()
                                     : a.expansion.min_poly() * b.expansion.min_poly();
        joined.emplace(std::move(reals), std::vector<std::pair<double, double>>{}, 1, mp);
    } else {
        throw Error(ErrorCode::Parse, "unsupported expansion join for direct product");
    }

    SubstitutionRule out{{}, {}, *joined, {}};
    const int k = ka * kb;
    out.prototiles.reserve(k);
    for (int ia = 0; ia < ka; ++ia)
        for (int ib = 0; ib < kb; ++ib)
            out.prototiles.push_back({ia * kb + ib + 1,
                                      Box::product(a.prototiles[ia].support,
                                                   b.prototiles[ib].support)});
    out.digits.assign(k, std::vector<std::vector<Vec>>(k));
    for (int ia = 0; ia < ka; ++ia)
        for (int ib = 0; ib < kb; ++ib)
            for (int ja = 0; ja < ka; ++ja)
                for (int jb = 0; jb < kb; ++jb) {
                    std::vector<Vec>& dst = out.digits[ia * kb + ib][ja * kb + jb];
                    for (const Vec& ua : a.digits[ia][ja])
                        for (const Vec& ub : b.digits[ib][jb]) {
                            Vec v(ua.size() + ub.size());
                            v << ua, ub;
                            dst.push_back(v);
                        }
                }

    // designated child of (ja, jb) combines the factors' designated children
    out.tile_map.assign(k, 0);
    for (int ja = 0; ja < ka; ++ja)
        for (int jb = 0; jb < kb; ++jb) {
            const auto [ia, ua] = a.children_of(ja).at(a.tile_map.at(ja));
            const auto [ib, ub] = b.children_of(jb).at(b.tile_map.at(jb));
            Vec want(ua.size() + ub.size());
            want << ua, ub;
            const auto ch = out.children_of(ja * kb + jb);
            int idx = -1;
            for (size_t c = 0; c < ch.size(); ++c)
                if (ch[c].first == ia * kb + ib && ch[c].second == want) {
                    idx = static_cast<int>(c);
                    break;
                }
            if (idx < 0) throw Error(ErrorCode::Internal, "product tile map resolution failed");
            out.tile_map[ja * kb + jb] = idx;
        }
    return out;
}

}  // namespace pisotiles
