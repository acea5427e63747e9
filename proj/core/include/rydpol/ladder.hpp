#pragma once

// Double-ladder reduction (Omega_12 = Omega_21 = 0, Omega_11 = Omega_22 = Omega).
//
// With Vt(r) = V(r) / |Omega|^2 and s_jl = (d_j + d_l) / 2 the closure is
// explicit and every pair component (j, l) evolves independently:
//
//   d_z  Phi^Es = (i/2) d_j (Vt Phi^Es + (d_l/2)(Phi^sE - Phi^Es)) / (Vt - s_jl)
//   d_z' Phi^sE = (i/2) d_l (Vt Phi^sE + (d_j/2)(Phi^Es - Phi^sE)) / (Vt - s_jl)
//
// and Phi_EE = -(Phi^Es + Phi^sE) / 2 away from the entrance edges.

#include <vector>

#include "rydpol/fullsolve.hpp"
#include "rydpol/transport.hpp"

namespace rydpol
{
    struct LadderSolution
    {
        TwoPointGrid grid;
        SchemeParams params;
        PairField input;
        FieldGrid es;
        FieldGrid se;

        // Imposed input on the entrance edges, the half-sum elsewhere.
        PairField ee(std::size_t i, std::size_t k) const;
    };

    LadderSolution solve_double_ladder(const SchemeParams& params, const TwoPointGrid& grid,
                                       InputBeams beams = InputBeams::both);

    // |Phi_EE,jl(z, z')|^2 normalised to the input intensity of that pair
    // (a^4 when the pair is not driven). Row-major n x n, 0-based (j, l).
    std::vector<double> correlation_map(const LadderSolution& sol, int j, int l);

    // Pair denominator Vt(r) - (d_j + d_l)/2; infinite interaction returns +inf.
    cplx ladder_denominator(const DerivedContext& ctx, double vt, int j, int l);

    // Interaction relative to |Omega|^2 at separation r (infinite sentinel at r = 0).
    Interaction ladder_interaction(const SchemeParams& params, double r);
}
