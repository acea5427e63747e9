#include "rydpol/ladder.hpp"

#include <cmath>
#include <limits>

#include "rydpol/error.hpp"

namespace rydpol
{
    namespace
    {
        // Per-separation coefficients of the linear transport right-hand side:
        // d_z Es = a_es * Es + a_se * Se, d_z' Se = b_se * Se + b_es * Es.
        struct LadderCoefficients
        {
            PairField a_es, a_se, b_se, b_es;
        };

        LadderCoefficients coefficients_at(const DerivedContext& ctx, Interaction vt)
        {
            LadderCoefficients c;
            const cplx half_i(0.0, 0.5);
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l)
                {
                    const cplx dj = ctx.dinv(j);
                    const cplx dl = ctx.dinv(l);
                    if (vt.is_infinite())
                    {
                        c.a_es(j, l) = half_i * dj;
                        c.a_se(j, l) = 0.0;
                        c.b_se(j, l) = half_i * dl;
                        c.b_es(j, l) = 0.0;
                        continue;
                    }
                    // Numerator and denominator divided by max(Vt, 1).
                    const double scale = std::max(vt.value(), 1.0);
                    const double w = vt.value() / scale;
                    const cplx den = w - 0.5 * (dj + dl) / scale;
                    c.a_es(j, l) = half_i * dj * (w - 0.5 * dl / scale) / den;
                    c.a_se(j, l) = half_i * dj * (0.5 * dl / scale) / den;
                    c.b_se(j, l) = half_i * dl * (w - 0.5 * dj / scale) / den;
                    c.b_es(j, l) = half_i * dl * (0.5 * dj / scale) / den;
                }
            return c;
        }
    }

    Interaction ladder_interaction(const SchemeParams& params, double r)
    {
        if (!params.interactions)
            return Interaction::finite(0.0);
        const double omega2 = std::norm(params.rabi(0, 0));
        const Interaction v = vdw_potential(r, c6_from_rb(params.rb, params.omega_max()));
        if (v.is_infinite())
            return v;
        return Interaction::finite(v.value() / omega2);
    }

    cplx ladder_denominator(const DerivedContext& ctx, double vt, int j, int l)
    {
        if (std::isinf(vt))
            return {std::numeric_limits<double>::infinity(), 0.0};
        return vt - 0.5 * (ctx.dinv(j) + ctx.dinv(l));
    }

    PairField LadderSolution::ee(std::size_t i, std::size_t k) const
    {
        if (i == 0 || k == 0)
            return input;
        return -0.5 * (es(i, k) + se(i, k));
    }

    LadderSolution solve_double_ladder(const SchemeParams& params, const TwoPointGrid& grid, InputBeams beams)
    {
        if (!params.is_double_ladder())
            throw PreconditionError("double-ladder solver requires Omega_12 = Omega_21 = 0 and Omega_11 = Omega_22");
        const DerivedContext ctx = make_context(params);
        const std::size_t n = grid.n;

        std::vector<LadderCoefficients> coeffs;
        coeffs.reserve(n);
        for (std::size_t m = 0; m < n; ++m)
            coeffs.push_back(coefficients_at(ctx, ladder_interaction(params, grid.coord(m))));

        TransportRhs rhs = [&](std::size_t i, std::size_t k, const TransportState& s) {
            const LadderCoefficients& c = coeffs[i > k ? i - k : k - i];
            TransportState r;
            r.along_z = c.a_es.cwiseProduct(s.along_z) + c.a_se.cwiseProduct(s.along_zp);
            r.along_zp = c.b_se.cwiseProduct(s.along_zp) + c.b_es.cwiseProduct(s.along_z);
            return r;
        };

        const PairField input = input_pair_amplitude(beams, params.amplitude);
        LadderSolution sol{grid, params, input, FieldGrid(n), FieldGrid(n)};
        const TransportEdges edges = TransportEdges::uniform(n, -input, -input, input);
        march_transport(grid, edges, rhs, [&](std::size_t i, std::span<const TransportState> row) {
            for (std::size_t k = 0; k < n; ++k)
            {
                sol.es(i, k) = row[k].along_z;
                sol.se(i, k) = row[k].along_zp;
            }
        });
        return sol;
    }

    std::vector<double> correlation_map(const LadderSolution& sol, int j, int l)
    {
        if (j < 0 || j > 1 || l < 0 || l > 1)
            throw PreconditionError("pair component indices must be 0 or 1");
        const double a2 = sol.params.amplitude * sol.params.amplitude;
        const double in = std::norm(sol.input(j, l));
        const double norm = in > 0.0 ? in : a2 * a2;
        const std::size_t n = sol.grid.n;
        std::vector<double> map(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                map[i * n + k] = std::norm(sol.ee(i, k)(j, l)) / norm;
        return map;
    }
}
