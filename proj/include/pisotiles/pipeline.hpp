#pragma once

// Orchestration: classification reports and the full spectrum / Meyer-trend
// pipelines over a substitution rule.  Everything here is deterministic.

#include "pisotiles/io.hpp"
#include "pisotiles/spectrum.hpp"
#include "pisotiles/tiling.hpp"

namespace pisotiles {

struct SpectrumOptions {
    int N = 25;                // profile length
    int K_max = 4;             // search depth for the constructed family
    double grid_spacing = 0.25;
    double grid_lo = -2.0;
    double grid_hi = 2.0;
    double precision = 1e-12;
    std::size_t tile_cap = 1000000;
    int target_tiles = 300;    // stop expanding once the patch has this many
    ProfileThresholds thresholds;
};

struct PreparedPatch {
    TilingPatch patch;
    int k = 0;           // substitution steps applied to the seed
    int seed_power = 1;  // omega^power fixes the seed tile
    double window = 0.0;
    ReturnVectorSet xi;
    std::vector<Vec> periods_detected;
};

/// Seed, grow until `target_tiles` tiles and a control-point reach of at least
/// `min_reach`, then attach control points and collect return vectors.
PreparedPatch prepare_patch(const SubstitutionRule& rule, std::size_t tile_cap, int target_tiles,
                            double min_reach = 0.0);

/// Root indices (into isolate_roots of min_poly) matched by the block
/// eigenvalues of one psi copy.
SpectrumSelection selection_for(const ExpansionMap& phi, double precision = 1e-12);

const char* to_string(Verdict v);

/// Root table + Pisot/Perron verdicts + a Pisot-family verdict per selection.
/// Empty `selections` defaults to the set of roots with certified modulus > 1.
Json classify_report(const IntPolynomial& poly, std::vector<std::vector<int>> selections,
                     double precision = 1e-12);

Json run_spectrum(const SubstitutionRule& rule, const SpectrumOptions& opts);

Json run_meyer(const SubstitutionRule& rule, const std::vector<double>& windows,
               std::size_t tile_cap = 1000000);

Json validation_to_json(const ValidationReport& rep);

}  // namespace pisotiles
