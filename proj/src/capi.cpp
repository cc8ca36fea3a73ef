#include "pisotiles.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "pisotiles/pipeline.hpp"

using namespace pisotiles;

struct pt_engine {
    SubstitutionRule rule;
};

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_err(char** err_msg, const std::string& msg) {
    if (err_msg) *err_msg = dup_string(msg);
}

pt_status status_of(const Error& e) { return static_cast<pt_status>(exit_code_for(e.code())); }

template <typename Fn>
pt_status guarded(char** err_msg, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        set_err(err_msg, e.what());
        return status_of(e);
    } catch (const std::bad_alloc&) {
        set_err(err_msg, "out of memory");
        return PT_INTERNAL;
    } catch (const std::exception& e) {
        set_err(err_msg, e.what());
        return PT_INTERNAL;
    }
}

Json parse_or_throw(const char* text, const char* what) {
    if (!text) throw Error(ErrorCode::Parse, std::string(what) + " is null");
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + what);
    return j;
}

}  // namespace

extern "C" {

pt_status pt_classify(const char* poly_json, const char* selections_json, double precision,
                      char** out_json, char** err_msg) {
    return guarded(err_msg, [&]() -> pt_status {
        if (!out_json) throw Error(ErrorCode::Parse, "out_json is null");
        const IntPolynomial poly = poly_from_json(parse_or_throw(poly_json, "polynomial"));
        std::vector<std::vector<int>> selections;
        if (selections_json) {
            const Json sj = parse_or_throw(selections_json, "selections");
            if (!sj.is_array()) throw Error(ErrorCode::Parse, "selections must be an array");
            for (const Json& s : sj) selections.push_back(s.get<std::vector<int>>());
        }
        if (!(precision > 0.0)) precision = 1e-12;
        *out_json = dup_string(canonical_dump(classify_report(poly, selections, precision)));
        return PT_OK;
    });
}

pt_status pt_engine_create(const char* rule_json, pt_engine** out, char** err_msg) {
    return guarded(err_msg, [&]() -> pt_status {
        if (!out) throw Error(ErrorCode::Parse, "out is null");
        SubstitutionRule rule = rule_from_json(parse_or_throw(rule_json, "rule"));
        *out = new pt_engine{std::move(rule)};
        return PT_OK;
    });
}

pt_status pt_engine_create_from_file(const char* path, pt_engine** out, char** err_msg) {
    return guarded(err_msg, [&]() -> pt_status {
        if (!out || !path) throw Error(ErrorCode::Parse, "null argument");
        SubstitutionRule rule = rule_from_file(path);
        *out = new pt_engine{std::move(rule)};
        return PT_OK;
    });
}

void pt_engine_destroy(pt_engine* engine) { delete engine; }

pt_status pt_engine_validate(pt_engine* engine, char** report_json, char** err_msg) {
    return guarded(err_msg, [&]() -> pt_status {
        if (!engine || !report_json) throw Error(ErrorCode::Parse, "null argument");
        *report_json = dup_string(canonical_dump(validation_to_json(validate_rule(engine->rule))));
        return PT_OK;
    });
}

namespace {

TilingPatch expand_for_api(pt_engine* engine, int k, size_t tile_cap, int seed_tile) {
    const ValidationReport rep = validate_rule(engine->rule);
    if (!rep.valid) throw Error(ErrorCode::InvalidRule, canonical_dump(validation_to_json(rep)));
    TilingPatch seed;
    if (seed_tile > 0) {
        if (seed_tile > engine->rule.num_types())
            throw Error(ErrorCode::Parse, "seed tile label out of range");
        seed.tiles.push_back({seed_tile, Vec::Zero(engine->rule.expansion.d())});
    } else {
        seed = fixed_point_seed(engine->rule).seed;
    }
    return expand(engine->rule, seed, k, tile_cap ? tile_cap : 1000000);
}

}  // namespace

pt_status pt_engine_expand(pt_engine* engine, int k, size_t tile_cap, int seed_tile,
                           char** patch_json, char** err_msg) {
    return guarded(err_msg, [&]() -> pt_status {
        if (!engine || !patch_json) throw Error(ErrorCode::Parse, "null argument");
        TilingPatch patch = expand_for_api(engine, k, tile_cap, seed_tile);
        attach_control_points(engine->rule, patch);
        *patch_json = dup_string(canonical_dump(patch_to_json(patch)));
        return PT_OK;
    });
}

pt_status pt_engine_render_svg(pt_engine* engine, int k, size_t tile_cap, int seed_tile,
                               char** svg_out, char** err_msg) {
    return guarded(err_msg, [&]() -> pt_status {
        if (!engine || !svg_out) throw Error(ErrorCode::Parse, "null argument");
        TilingPatch patch = expand_for_api(engine, k, tile_cap, seed_tile);
        *svg_out = dup_string(render_svg(engine->rule, patch));
        return PT_OK;
    });
}

void pt_spectrum_options_default(pt_spectrum_options* opts) {
    if (!opts) return;
    const SpectrumOptions def;
    opts->profile_len = def.N;
    opts->k_max = def.K_max;
    opts->grid_spacing = def.grid_spacing;
    opts->grid_lo = def.grid_lo;
    opts->grid_hi = def.grid_hi;
    opts->precision = def.precision;
    opts->tile_cap = def.tile_cap;
    opts->target_tiles = def.target_tiles;
}

pt_status pt_engine_spectrum(pt_engine* engine, const pt_spectrum_options* opts,
                             char** report_json, char** err_msg) {
    return guarded(err_msg, [&]() -> pt_status {
        if (!engine || !report_json) throw Error(ErrorCode::Parse, "null argument");
        SpectrumOptions so;
        if (opts) {
            so.N = opts->profile_len;
            so.K_max = opts->k_max;
            so.grid_spacing = opts->grid_spacing;
            so.grid_lo = opts->grid_lo;
            so.grid_hi = opts->grid_hi;
            so.precision = opts->precision;
            so.tile_cap = opts->tile_cap;
            so.target_tiles = opts->target_tiles;
        }
        if (so.N < 8) throw Error(ErrorCode::Parse, "profile length must be at least 8");
        *report_json = dup_string(canonical_dump(run_spectrum(engine->rule, so)));
        return PT_OK;
    });
}

pt_status pt_engine_meyer(pt_engine* engine, const double* windows, int n_windows,
                          char** report_json, char** err_msg) {
    return guarded(err_msg, [&]() -> pt_status {
        if (!engine || !report_json || (!windows && n_windows > 0))
            throw Error(ErrorCode::Parse, "null argument");
        std::vector<double> ws(windows, windows + (n_windows > 0 ? n_windows : 0));
        *report_json = dup_string(canonical_dump(run_meyer(engine->rule, ws)));
        return PT_OK;
    });
}

void pt_string_free(char* s) { std::free(s); }

}  // extern "C"
