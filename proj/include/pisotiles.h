/* C interface to the tiling/spectral engine.
 *
 * All functions return a pt_status.  Functions producing text allocate a
 * NUL-terminated string into the out-parameter; release it with
 * pt_string_free.  On failure *err_msg (when non-NULL) receives a
 * human-readable message (also pt_string_free'd by the caller).
 */

#ifndef PISOTILES_H
#define PISOTILES_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pt_status {
    PT_OK = 0,
    PT_INTERNAL = 1,
    PT_PARSE = 2,
    PT_UNDECIDABLE = 3,
    PT_INVALID_RULE = 4,
    PT_RENDER_UNSUPPORTED = 5
} pt_status;

typedef struct pt_engine pt_engine; /* opaque: one loaded substitution rule */

/* poly_json: array of decimal integer strings, lowest degree first.
 * selections_json: optional (may be NULL) array of arrays of root indices. */
pt_status pt_classify(const char* poly_json, const char* selections_json, double precision,
                      char** out_json, char** err_msg);

pt_status pt_engine_create(const char* rule_json, pt_engine** out, char** err_msg);
pt_status pt_engine_create_from_file(const char* path, pt_engine** out, char** err_msg);
void pt_engine_destroy(pt_engine* engine);

/* Always succeeds on a live engine; the report says whether the rule is valid. */
pt_status pt_engine_validate(pt_engine* engine, char** report_json, char** err_msg);

/* k substitution steps applied to the rule's self-nesting seed tile.
 * seed_tile: 1-based prototile label to seed from instead, or 0 for the
 * automatic nested seed. */
pt_status pt_engine_expand(pt_engine* engine, int k, size_t tile_cap, int seed_tile,
                           char** patch_json, char** err_msg);

pt_status pt_engine_render_svg(pt_engine* engine, int k, size_t tile_cap, int seed_tile,
                               char** svg_out, char** err_msg);

typedef struct pt_spectrum_options {
    int profile_len;     /* N: epsilon profile length */
    int k_max;           /* search depth for the constructed family */
    double grid_spacing; /* candidate grid: spacing and per-axis range */
    double grid_lo;
    double grid_hi;
    double precision;    /* root certification precision */
    size_t tile_cap;
    int target_tiles;    /* patch growth target */
} pt_spectrum_options;

void pt_spectrum_options_default(pt_spectrum_options* opts);

pt_status pt_engine_spectrum(pt_engine* engine, const pt_spectrum_options* opts,
                             char** report_json, char** err_msg);

pt_status pt_engine_meyer(pt_engine* engine, const double* windows, int n_windows,
                          char** report_json, char** err_msg);

void pt_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PISOTILES_H */
