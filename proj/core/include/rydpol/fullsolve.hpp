#pragma once

// Full steady-state system for (Phi_EE, Phi^Es, Phi^sE) on the (z, z') grid,
// with Phi^ss eliminated pointwise by the closure:
//
//   d_z Phi^Es_jl          = (i/2) d_j (Phi^Es_jl + Phi^ss_jl)       [+ v/c terms]
//   d_z' Phi^sE_jl         = (i/2) d_l (Phi^sE_jl + Phi^ss_jl)       [+ v/c terms]
//   (d_z + d_z') Phi_EE_jl = (i/2) ((d_j + d_l) Phi_EE_jl + d_l Phi^Es_jl + d_j Phi^sE_jl)
//
// with d_j = 1/dtilde_j and V = V(|z - z'|).

#include "rydpol/closure.hpp"
#include "rydpol/model.hpp"
#include "rydpol/transport.hpp"

namespace rydpol
{
    enum class InputBeams
    {
        first_only,
        both
    };

    // Phi_EE of the incident light: a^2 on (1,1) only, or a^2 on all pairs.
    PairField input_pair_amplitude(InputBeams beams, double amplitude);

    // Uniform boundary data on the two entrance edges.
    struct EdgeSpec
    {
        PairField ee_at_z0;
        PairField es_at_z0;
        PairField ee_at_zp0;
        PairField se_at_zp0;

        // Entering photon pairs with an already-formed dark-state polariton:
        // Phi^Es(0, z') = -Phi_EE(0, z') and Phi^sE(z, 0) = -Phi_EE(z, 0).
        static EdgeSpec dark_state(const PairField& ee);
    };

    struct FullOptions
    {
        bool include_vc = false;
    };

    struct FullSolution
    {
        TwoPointGrid grid;
        SchemeParams params;
        EdgeSpec edges;
        FieldGrid ee;
        FieldGrid es;
        FieldGrid se;
        FieldGrid ss;
    };

    FullSolution solve_full(const SchemeParams& params, const TwoPointGrid& grid, const EdgeSpec& bc,
                            const FullOptions& options = {});

    // max over interior nodes of |Phi_EE + Phi^Es+| / max(|Phi_EE|, 1e-12 a^2)
    // (Frobenius norms over the pair indices).
    double validate_ee_approx(const FullSolution& sol);

    // Largest change of Phi_EE on the coarse nodes under one refinement,
    // relative to the largest |Phi_EE| on the coarse grid. The fine grid must be
    // coarse.grid.refined(f) for an integer f.
    double refinement_change(const FieldGrid& coarse, const FieldGrid& fine);

    inline constexpr double coarse_grid_threshold = 0.10;
}
