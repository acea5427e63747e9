#include "rydpol/fullsolve.hpp"

#include <algorithm>
#include <cmath>

#include "rydpol/error.hpp"

namespace rydpol
{
    PairField input_pair_amplitude(InputBeams beams, double amplitude)
    {
        const double a2 = amplitude * amplitude;
        PairField ee = PairField::Zero();
        if (beams == InputBeams::first_only)
            ee(0, 0) = a2;
        else
            ee.setConstant(a2);
        return ee;
    }

    EdgeSpec EdgeSpec::dark_state(const PairField& ee)
    {
        return {ee, -ee, ee, -ee};
    }

    FullSolution solve_full(const SchemeParams& params, const TwoPointGrid& grid, const EdgeSpec& bc,
                            const FullOptions& options)
    {
        const DerivedContext ctx = make_context(params);
        const std::size_t n = grid.n;

        // Closure maps depend only on |z - z'|, i.e. on |i - k|.
        std::vector<ClosureKernel> kernels;
        kernels.reserve(n);
        for (std::size_t m = 0; m < n; ++m)
            kernels.emplace_back(ctx, ctx.potential(grid.coord(m)));

        Matrix2c dg = Matrix2c::Zero();
        dg(0, 0) = ctx.dinv1;
        dg(1, 1) = ctx.dinv2;
        const cplx half_i(0.0, 0.5);
        const bool vc = options.include_vc;
        const double inv_c = 1.0 / params.c_ratio;
        // sum_m d_m v_lm X_jm = X (diag(d) v^T); sum_m d_m v_jm X_ml = (v diag(d)) X
        const Matrix2c right_vc = dg * ctx.v.transpose() * inv_c;
        const Matrix2c left_vc = ctx.v * dg * inv_c;

        auto kernel_for = [&](std::size_t i, std::size_t k) -> const ClosureKernel& {
            return kernels[i > k ? i - k : k - i];
        };

        TransportRhs rhs = [&](std::size_t i, std::size_t k, const TransportState& s) {
            const PairField ss = kernel_for(i, k).apply(s.along_z, s.along_zp);
            TransportState r;
            r.along_z = half_i * (dg * (s.along_z + ss));
            r.along_zp = half_i * ((s.along_zp + ss) * dg);
            r.along_diag = half_i * (dg * s.along_diag + s.along_diag * dg + s.along_z * dg + dg * s.along_zp);
            if (vc)
            {
                r.along_z += half_i * ((s.along_z + s.along_diag) * right_vc);
                r.along_zp += half_i * (left_vc * (s.along_zp + s.along_diag));
            }
            return r;
        };

        FullSolution sol{grid, params, bc, FieldGrid(n), FieldGrid(n), FieldGrid(n), FieldGrid(n)};
        TransportEdges edges;
        edges.along_z_at_z0.assign(n, bc.es_at_z0);
        edges.along_zp_at_zp0.assign(n, bc.se_at_zp0);
        edges.diag_at_z0.assign(n, bc.ee_at_z0);
        edges.diag_at_zp0.assign(n, bc.ee_at_zp0);
        // The corner belongs to both edges; the z = 0 data wins.
        edges.diag_at_zp0[0] = bc.ee_at_z0;

        march_transport(grid, edges, rhs, [&](std::size_t i, std::span<const TransportState> row) {
            for (std::size_t k = 0; k < n; ++k)
            {
                sol.es(i, k) = row[k].along_z;
                sol.se(i, k) = row[k].along_zp;
                sol.ee(i, k) = row[k].along_diag;
                sol.ss(i, k) = kernel_for(i, k).apply(row[k].along_z, row[k].along_zp);
            }
        });
        return sol;
    }

    double validate_ee_approx(const FullSolution& sol)
    {
        const double eps = 1e-12 * sol.params.amplitude * sol.params.amplitude;
        const std::size_t n = sol.grid.n;
        double worst = 0.0;
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 1; k < n; ++k)
            {
                const PairField& ee = sol.ee(i, k);
                const PairField plus = 0.5 * (sol.es(i, k) + sol.se(i, k));
                const double num = (ee + plus).norm();
                worst = std::max(worst, num / std::max(ee.norm(), eps));
            }
        return worst;
    }

    double refinement_change(const FieldGrid& coarse, const FieldGrid& fine)
    {
        const std::size_t nc = coarse.n();
        const std::size_t nf = fine.n();
        if (nc < 2 || (nf - 1) % (nc - 1) != 0)
            throw PreconditionError("fine grid does not nest the coarse grid");
        const std::size_t f = (nf - 1) / (nc - 1);
        double scale = 0.0;
        double change = 0.0;
        for (std::size_t i = 0; i < nc; ++i)
            for (std::size_t k = 0; k < nc; ++k)
            {
                scale = std::max(scale, coarse(i, k).norm());
                change = std::max(change, (coarse(i, k) - fine(i * f, k * f)).norm());
            }
        return scale > 0.0 ? change / scale : change;
    }
}
