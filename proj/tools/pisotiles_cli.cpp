// Command-line front end.  All engine work goes through the C API; this file
// only handles argument parsing, file plumbing and CSV extraction.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pisotiles.h"

namespace {

struct Freed {
    char* s = nullptr;
    ~Freed() { pt_string_free(s); }
};

int fail(pt_status st, const char* msg) {
    std::cerr << (msg ? msg : "unknown error") << "\n";
    return static_cast<int>(st);
}

std::string slurp(const std::string& path, bool& ok) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ok = false;
        return {};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    ok = true;
    return ss.str();
}

bool write_out(const std::string& dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream out(dir + "/" + name, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

std::string csv_for_candidate(const nlohmann::json& cand, const nlohmann::json& bound) {
    std::string csv = "n,eps_n,bound_n\n";
    const auto& eps = cand.at("eps");
    char line[80];
    for (size_t n = 0; n < eps.size(); ++n) {
        const double b = (bound.is_array() && n < bound.size()) ? bound[n].get<double>() : 0.0;
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g\n", n, eps[n].get<double>(), b);
        csv += line;
    }
    return csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"substitution tiling engine: classification, expansion, spectrum, Meyer trends"};
    app.require_subcommand(1);
    app.fallthrough();  // allow the global flags after a subcommand

    double precision = 1e-12;
    std::size_t tile_cap = 1000000;
    std::string out_dir;
    int seed_tile = 0;
    app.add_option("--precision", precision, "root certification precision");
    app.add_option("--tile-cap", tile_cap, "maximum tiles per patch");
    app.add_option("--out", out_dir, "directory for output artifacts");
    app.add_option("--seed-tile", seed_tile, "1-based prototile label to seed from (0 = auto)");

    // classify
    auto* classify = app.add_subcommand("classify", "root table and Pisot/Perron verdicts");
    std::string poly_file;
    std::vector<std::string> selects;
    classify->add_option("poly_file", poly_file, "polynomial JSON file")->required();
    classify->add_option("--select", selects,
                         "comma-separated root indices forming a selection (repeatable)");

    // validate
    auto* validate = app.add_subcommand("validate", "check a substitution rule");
    std::string validate_spec;
    validate->add_option("spec_file", validate_spec, "rule JSON file")->required();

    // expand
    auto* expand_cmd = app.add_subcommand("expand", "apply the substitution k times");
    std::string expand_spec, render_path;
    int expand_k = 1;
    expand_cmd->add_option("spec_file", expand_spec, "rule JSON file")->required();
    expand_cmd->add_option("--k", expand_k, "number of substitution steps");
    expand_cmd->add_option("--render", render_path, "write an SVG of the patch here");

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalue criterion pipeline");
    std::string spectrum_spec;
    pt_spectrum_options sopts;
    pt_spectrum_options_default(&sopts);
    std::vector<double> grid;
    spectrum->add_option("spec_file", spectrum_spec, "rule JSON file")->required();
    spectrum->add_option("--N", sopts.profile_len, "profile length");
    spectrum->add_option("--K-max", sopts.k_max, "constructed-family search depth");
    spectrum->add_option("--grid", grid, "candidate grid as SPACING,LO,HI")
        ->delimiter(',')
        ->expected(3);
    spectrum->add_option("--target-tiles", sopts.target_tiles, "patch growth target");

    // meyer
    auto* meyer = app.add_subcommand("meyer", "difference-set gap trend over windows");
    std::string meyer_spec;
    std::vector<double> windows;
    meyer->add_option("spec_file", meyer_spec, "rule JSON file")->required();
    meyer->add_option("--windows", windows, "window radii")->delimiter(',')->required();

    CLI11_PARSE(app, argc, argv);

    if (classify->parsed()) {
        bool ok = false;
        const std::string poly = slurp(poly_file, ok);
        if (!ok) return fail(PT_PARSE, ("cannot read " + poly_file).c_str());
        std::string selections_json;
        if (!selects.empty()) {
            selections_json = "[";
            for (size_t i = 0; i < selects.size(); ++i)
                selections_json += (i ? ",[" : "[") + selects[i] + "]";
            selections_json += "]";
        }
        Freed out, err;
        const pt_status st = pt_classify(poly.c_str(),
                                         selects.empty() ? nullptr : selections_json.c_str(),
                                         precision, &out.s, &err.s);
        if (st != PT_OK) return fail(st, err.s);
        std::cout << out.s;
        if (!out_dir.empty() && !write_out(out_dir, "classify.json", out.s))
            return fail(PT_INTERNAL, "cannot write output");
        return 0;
    }

    const std::string spec_file = validate->parsed()  ? validate_spec
                                  : expand_cmd->parsed() ? expand_spec
                                  : spectrum->parsed()   ? spectrum_spec
                                                         : meyer_spec;
    pt_engine* engine = nullptr;
    {
        Freed err;
        const pt_status st = pt_engine_create_from_file(spec_file.c_str(), &engine, &err.s);
        if (st != PT_OK) return fail(st, err.s);
    }
    struct EngineGuard {
        pt_engine* e;
        ~EngineGuard() { pt_engine_destroy(e); }
    } guard{engine};

    if (validate->parsed()) {
        Freed out, err;
        const pt_status st = pt_engine_validate(engine, &out.s, &err.s);
        if (st != PT_OK) return fail(st, err.s);
        std::cout << out.s;
        const auto rep = nlohmann::json::parse(out.s);
        return rep.at("valid").get<bool>() ? 0 : static_cast<int>(PT_INVALID_RULE);
    }

    if (expand_cmd->parsed()) {
        Freed out, err;
        pt_status st = pt_engine_expand(engine, expand_k, tile_cap, seed_tile, &out.s, &err.s);
        if (st != PT_OK) return fail(st, err.s);
        std::cout << out.s;
        if (!out_dir.empty() && !write_out(out_dir, "patch.json", out.s))
            return fail(PT_INTERNAL, "cannot write output");
        if (!render_path.empty()) {
            Freed svg, rerr;
            st = pt_engine_render_svg(engine, expand_k, tile_cap, seed_tile, &svg.s, &rerr.s);
            if (st != PT_OK) return fail(st, rerr.s);
            std::ofstream f(render_path, std::ios::binary);
            if (!f) return fail(PT_INTERNAL, "cannot write SVG");
            f << svg.s;
        }
        return 0;
    }

    if (spectrum->parsed()) {
        if (!grid.empty()) {
            sopts.grid_spacing = grid[0];
            sopts.grid_lo = grid[1];
            sopts.grid_hi = grid[2];
        }
        sopts.precision = precision;
        sopts.tile_cap = tile_cap;
        Freed out, err;
        const pt_status st = pt_engine_spectrum(engine, &sopts, &out.s, &err.s);
        if (st != PT_OK) return fail(st, err.s);
        std::cout << out.s;
        if (!out_dir.empty()) {
            if (!write_out(out_dir, "spectrum.json", out.s))
                return fail(PT_INTERNAL, "cannot write output");
            const auto rep = nlohmann::json::parse(out.s);
            const nlohmann::json bound =
                rep.contains("decay_bound") ? rep["decay_bound"] : nlohmann::json();
            const auto& cands = rep.at("candidates");
            for (size_t i = 0; i < cands.size(); ++i)
                if (!write_out(out_dir, "decay_" + std::to_string(i) + ".csv",
                               csv_for_candidate(cands[i], bound)))
                    return fail(PT_INTERNAL, "cannot write CSV");
        }
        return 0;
    }

    // meyer
    Freed out, err;
    const pt_status st =
        pt_engine_meyer(engine, windows.data(), static_cast<int>(windows.size()), &out.s, &err.s);
    if (st != PT_OK) return fail(st, err.s);
    std::cout << out.s;
    if (!out_dir.empty() && !write_out(out_dir, "meyer.json", out.s))
        return fail(PT_INTERNAL, "cannot write output");
    return 0;
}
