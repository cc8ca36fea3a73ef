#include "pisotiles/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pisotiles {

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw Error(ErrorCode::Parse, what);
}

double require_number(const Json& j, const char* what) {
    if (!j.is_number()) parse_fail(std::string(what) + " must be a number");
    return j.get<double>();
}

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void dump_rec(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: already sorted
                if (!first) out += ',';
                first = false;
                out += Json(it.key()).dump();
                out += ':';
                dump_rec(it.value(), out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (size_t i = 0; i < j.size(); ++i) {
                if (i) out += ',';
                dump_rec(j[i], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float:
            out += fmt_double(j.get<double>());
            break;
        default:
            out += j.dump();
    }
}

}  // namespace

std::string canonical_dump(const Json& j) {
    std::string out;
    dump_rec(j, out);
    out += '\n';
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) parse_fail("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

IntPolynomial poly_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) parse_fail("polynomial must be a non-empty array");
    std::vector<BigInt> coeffs;
    for (const Json& c : j) {
        if (c.is_string()) {
            try {
                coeffs.emplace_back(c.get<std::string>());
            } catch (const std::exception&) {
                parse_fail("bad integer literal in polynomial: " + c.dump());
            }
        } else if (c.is_number_integer()) {
            coeffs.emplace_back(c.get<long long>());
        } else {
            parse_fail("polynomial coefficients must be decimal strings or integers");
        }
    }
    return IntPolynomial(std::move(coeffs));
}

Json poly_to_json(const IntPolynomial& p) {
    Json out = Json::array();
    for (const BigInt& c : p.coeffs()) out.push_back(c.str());
    return out;
}

ExpansionMap expansion_from_json(const Json& j) {
    if (!j.is_object()) parse_fail("expansion must be an object");
    if (!j.contains("min_poly")) parse_fail("expansion needs min_poly");
    IntPolynomial mp = poly_from_json(j.at("min_poly"));

    std::vector<double> real_blocks;
    if (j.contains("real_blocks"))
        for (const Json& v : j.at("real_blocks"))
            real_blocks.push_back(require_number(v, "real block"));

    std::vector<std::pair<double, double>> complex_blocks;
    if (j.contains("complex_blocks"))
        for (const Json& v : j.at("complex_blocks")) {
            if (!v.is_array() || v.size() != 2) parse_fail("complex block must be [a,b]");
            complex_blocks.emplace_back(require_number(v[0], "complex block"),
                                        require_number(v[1], "complex block"));
        }

    int J = 1;
    if (j.contains("multiplicity")) {
        if (!j.at("multiplicity").is_number_integer()) parse_fail("multiplicity must be an integer");
        J = j.at("multiplicity").get<int>();
    }
    return ExpansionMap(std::move(real_blocks), std::move(complex_blocks), J, std::move(mp));
}

Json expansion_to_json(const ExpansionMap& phi) {
    Json out;
    out["min_poly"] = poly_to_json(phi.min_poly());
    out["real_blocks"] = phi.real_blocks();
    Json cb = Json::array();
    for (auto [a, b] : phi.complex_blocks()) cb.push_back(Json::array({a, b}));
    out["complex_blocks"] = cb;
    out["multiplicity"] = phi.J();
    return out;
}

Vec vec_from_json(const Json& j, int expect_dim) {
    if (!j.is_array()) parse_fail("vector must be an array");
    if (expect_dim >= 0 && static_cast<int>(j.size()) != expect_dim)
        parse_fail("vector has wrong dimension");
    Vec v(static_cast<int>(j.size()));
    for (int i = 0; i < v.size(); ++i) v[i] = require_number(j[i], "vector entry");
    return v;
}

Json json_from_vec(const Vec& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json json_from_mat(const Mat& M) {
    Json out = Json::array();
    for (int r = 0; r < M.rows(); ++r) out.push_back(json_from_vec(M.row(r)));
    return out;
}

SubstitutionRule rule_from_json(const Json& j) {
    if (!j.is_object()) parse_fail("rule must be a JSON object");
    for (const char* key : {"prototiles", "digits", "expansion", "tile_map"})
        if (!j.contains(key)) parse_fail(std::string("rule is missing field: ") + key);

    SubstitutionRule rule{.prototiles = {},
                          .digits = {},
                          .expansion = expansion_from_json(j.at("expansion")),
                          .tile_map = {}};
    const int d = rule.expansion.d();

    for (const Json& pj : j.at("prototiles")) {
        if (!pj.is_object() || !pj.contains("label") || !pj.contains("box"))
            parse_fail("prototile needs label and box");
        Prototile p;
        p.label = pj.at("label").get<int>();
        for (const Json& iv : pj.at("box")) {
            if (!iv.is_array() || iv.size() != 2) parse_fail("box interval must be [lo,hi]");
            const double lo = require_number(iv[0], "box bound");
            const double hi = require_number(iv[1], "box bound");
            if (!(lo < hi)) parse_fail("box interval must have lo < hi");
            p.support.iv.push_back({lo, hi});
        }
        if (p.support.dim() != d) parse_fail("prototile box dimension does not match expansion");
        rule.prototiles.push_back(std::move(p));
    }
    const int n = rule.num_types();
    if (n == 0) parse_fail("rule needs at least one prototile");
    for (int i = 0; i < n; ++i)
        if (rule.prototiles[i].label != i + 1)
            parse_fail("prototile labels must be 1..n in order");

    rule.digits.assign(n, std::vector<std::vector<Vec>>(n));
    for (auto it = j.at("digits").begin(); it != j.at("digits").end(); ++it) {
        int i = 0, jj = 0;
        if (std::sscanf(it.key().c_str(), "%d,%d", &i, &jj) != 2 || i < 1 || i > n || jj < 1 ||
            jj > n)
            parse_fail("digit key must be \"i,j\" with 1-based type indices: " + it.key());
        for (const Json& vj : it.value())
            rule.digits[i - 1][jj - 1].push_back(vec_from_json(vj, d));
    }

    for (const Json& tm : j.at("tile_map")) {
        if (!tm.is_number_integer()) parse_fail("tile_map entries must be integers");
        rule.tile_map.push_back(tm.get<int>());
    }
    if (static_cast<int>(rule.tile_map.size()) != n)
        parse_fail("tile_map needs one entry per prototile");
    for (int jj = 0; jj < n; ++jj) {
        const int idx = rule.tile_map[jj];
        if (idx < 0 || idx >= static_cast<int>(rule.children_of(jj).size()))
            parse_fail("tile_map entry out of range for type " + std::to_string(jj + 1));
    }
    return rule;
}

SubstitutionRule rule_from_file(const std::string& path) {
    Json j = Json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) parse_fail("malformed JSON in " + path);
    return rule_from_json(j);
}

Json rule_to_json(const SubstitutionRule& rule) {
    Json out;
    Json protos = Json::array();
    for (const Prototile& p : rule.prototiles) {
        Json box = Json::array();
        for (const auto& iv : p.support.iv) box.push_back(Json::array({iv[0], iv[1]}));
        protos.push_back({{"label", p.label}, {"box", box}});
    }
    out["prototiles"] = protos;
    Json digits = Json::object();
    for (size_t i = 0; i < rule.digits.size(); ++i)
        for (size_t jj = 0; jj < rule.digits[i].size(); ++jj) {
            if (rule.digits[i][jj].empty()) continue;
            Json arr = Json::array();
            for (const Vec& v : rule.digits[i][jj]) arr.push_back(json_from_vec(v));
            digits[std::to_string(i + 1) + "," + std::to_string(jj + 1)] = arr;
        }
    out["digits"] = digits;
    out["expansion"] = expansion_to_json(rule.expansion);
    out["tile_map"] = rule.tile_map;
    return out;
}

Json patch_to_json(const TilingPatch& patch) {
    Json tiles = Json::array();
    for (size_t i = 0; i < patch.tiles.size(); ++i) {
        Json t;
        t["label"] = patch.tiles[i].label;
        t["translation"] = json_from_vec(patch.tiles[i].t);
        if (patch.control_points)
            t["control_point"] = json_from_vec((*patch.control_points)[i]);
        tiles.push_back(std::move(t));
    }
    Json out;
    out["generation"] = patch.generation;
    out["tiles"] = tiles;
    return out;
}

std::string render_svg(const SubstitutionRule& rule, const TilingPatch& patch) {
    const int d = rule.expansion.d();
    if (d > 2)
        throw Error(ErrorCode::RenderUnsupported, "SVG rendering supports at most 2 dimensions");
    if (patch.tiles.empty()) throw Error(ErrorCode::RenderUnsupported, "empty patch");

    auto box_of = [&](const TilingPatch::Tile& tile) {
        return rule.prototiles[tile.label - 1].support.translate(tile.t);
    };
    double lo[2] = {1e300, 0.0}, hi[2] = {-1e300, 1.0};
    if (d == 2) { lo[1] = 1e300; hi[1] = -1e300; }
    for (const auto& tile : patch.tiles) {
        const Box b = box_of(tile);
        for (int a = 0; a < d; ++a) {
            lo[a] = std::min(lo[a], b.iv[a][0]);
            hi[a] = std::max(hi[a], b.iv[a][1]);
        }
    }
    const double mx = 0.02 * (hi[0] - lo[0]), my = 0.02 * (hi[1] - lo[1]);

    // stable per-label palette via a Knuth-style hash
    auto fill = [](int label) {
        const unsigned hue = (static_cast<unsigned>(label) * 2654435761u) % 360u;
        return "hsl(" + std::to_string(hue) + ",65%,62%)";
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt_double(lo[0] - mx) + " " +
           fmt_double(lo[1] - my) + " " + fmt_double(hi[0] - lo[0] + 2 * mx) + " " +
           fmt_double(hi[1] - lo[1] + 2 * my) + "\">\n";
    for (const auto& tile : patch.tiles) {
        const Box b = box_of(tile);
        const double y0 = d == 2 ? b.iv[1][0] : 0.0;
        const double h = d == 2 ? b.iv[1][1] - b.iv[1][0] : 1.0;
        svg += "<rect x=\"" + fmt_double(b.iv[0][0]) + "\" y=\"" + fmt_double(y0) + "\" width=\"" +
               fmt_double(b.iv[0][1] - b.iv[0][0]) + "\" height=\"" + fmt_double(h) + "\" fill=\"" +
               fill(tile.label) + "\" stroke=\"black\" stroke-width=\"" +
               fmt_double(0.004 * (hi[0] - lo[0])) + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace pisotiles
