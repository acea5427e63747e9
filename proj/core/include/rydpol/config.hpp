#pragma once

// Run configuration: a flat JSON object with an optional nested "sweep".
//
//   solver        "equal" | "full" | "ladder2"             (required)
//   alpha, rb, amplitude, c_ratio, interactions
//   delta | delta1, delta2
//   omega, v12_over_v11  or  rabi: [[[re, im], [re, im]], [[re, im], [re, im]]]
//   mode          "piecewise" | "smooth"                   (equal)
//   lossless                                               (equal)
//   include_vc, c_ratios                                   (full)
//   hr, hR                                                 (equal)
//   n                                                      (full, ladder2)
//   beams         "both" | "first"                         (full, ladder2)
//   components    [[j, l], ...], 1-based                   (map output)
//   map_stride    write every k-th node of a map; 0 picks k so <= 301 per axis
//   sweep         {"from", "to", "step"} or {"values": [...]}  (equal)

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydpol/equalsolve.hpp"
#include "rydpol/fullsolve.hpp"
#include "rydpol/model.hpp"

namespace rydpol
{
    enum class Solver
    {
        equal,
        full,
        ladder2
    };

    const char* to_string(Solver s);

    struct SweepSpec
    {
        double from = -4.0;
        double to = 4.0;
        double step = 0.25;
        // Explicit values override the range when present.
        std::optional<std::vector<double>> values;

        std::vector<double> detunings() const;
    };

    struct RunConfig
    {
        Solver solver = Solver::equal;
        SchemeParams params;
        // Rabi matrix source: omega e^{iS} with cos S = ratio, or explicit.
        double omega = 1.0;
        std::optional<double> v12_over_v11;

        ClosedMode mode = ClosedMode::piecewise;
        bool lossless = false;
        bool include_vc = false;
        std::vector<double> c_ratios;

        double hr = 0.02;
        double hR = 0.01;
        std::size_t n = 301;

        InputBeams beams = InputBeams::both;
        std::vector<std::pair<int, int>> components{{1, 1}, {1, 2}};
        std::size_t map_stride = 0;
        SweepSpec sweep;
    };

    inline constexpr std::size_t default_full_nodes = 301;
    inline constexpr std::size_t default_ladder_nodes = 1201;

    // Throws ConfigError naming the offending key.
    RunConfig parse_config(const std::string& text);

    // Canonical JSON (sorted keys, all fields explicit).
    std::string serialize_config(const RunConfig& config);
}
