#include "rydpol/equalsolve.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "rydpol/error.hpp"

namespace rydpol
{
    namespace
    {
        using Block = BlockMatrix<4>;

        // I (x) v - v (x) I: sum_m (v_lm Phi_jm - v_jm Phi_ml).
        Block spin_orbit_matrix(const Matrix2c& v)
        {
            const Matrix2c id = Matrix2c::Identity();
            Block m;
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l)
                    for (int jp = 0; jp < 2; ++jp)
                        for (int lp = 0; lp < 2; ++lp)
                            m(2 * j + l, 2 * jp + lp) = id(j, jp) * v(l, lp) - v(j, jp) * id(l, lp);
            return m;
        }

        struct LocalCoefficients
        {
            cplx c;
            Block k;
        };

        LocalCoefficients smooth_coefficients(const DerivedContext& ctx, Interaction vr)
        {
            const cplx dt = ctx.dtilde1;
            const cplx i(0.0, 1.0);
            if (vr.is_zero())
                return {i / ctx.vbar, Block::Zero()};
            const Block a = compute_A(ctx, vr).a;
            if (vr.is_infinite())
                return {0.0, -a / dt};
            const double v = vr.value();
            if (v > 1.0)
            {
                const cplx den = ctx.vbar / v - dt;
                return {(i / v) / den, a / den};
            }
            const cplx den = ctx.vbar - dt * v;
            return {i / den, (v / den) * a};
        }
    }

    const char* to_string(ClosedMode mode)
    {
        return mode == ClosedMode::piecewise ? "piecewise" : "smooth";
    }

    ClosedMode closed_mode_from_string(const std::string& name)
    {
        if (name == "piecewise")
            return ClosedMode::piecewise;
        if (name == "smooth")
            return ClosedMode::smooth;
        throw PreconditionError("unknown closed-equation mode '" + name + "'");
    }

    ComRelGrid ComRelGrid::make(double alpha, double hr, double hR)
    {
        if (!(alpha > 0.0) || !(hr > 0.0) || !(hR > 0.0))
            throw PreconditionError("relative grid needs positive alpha, hr and hR");
        ComRelGrid g;
        g.alpha = alpha;
        g.half = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(alpha / hr)));
        g.steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(alpha / hR)));
        g.hr = alpha / static_cast<double>(g.half);
        g.hR = alpha / static_cast<double>(g.steps);
        return g;
    }

    ComRelGrid ComRelGrid::refined(std::size_t factor) const
    {
        ComRelGrid g = *this;
        g.half *= factor;
        g.steps *= factor;
        g.hr = alpha / static_cast<double>(g.half);
        g.hR = alpha / static_cast<double>(g.steps);
        return g;
    }

    PairField ClosedSolution::at(std::size_t snapshot, std::size_t i) const
    {
        return unflatten(snapshots.at(snapshot).at(i));
    }

    double inside_fraction(double r, double hr, double radius)
    {
        const double lo = std::max(r - 0.5 * hr, -radius);
        const double hi = std::min(r + 0.5 * hr, radius);
        return std::clamp((hi - lo) / hr, 0.0, 1.0);
    }

    BlockTridiagonalMatrix<4> closed_generator(const DerivedContext& ctx, const ComRelGrid& grid,
                                               ClosedMode mode, bool lossless)
    {
        const std::size_t n = grid.size();
        const double h = grid.hr;
        const cplx kinetic = lossless ? cplx(ctx.dtilde1.real(), 0.0) : ctx.dtilde1;
        const cplx off = -4.0 * kinetic / (h * h);
        const Block so = spin_orbit_matrix(ctx.v) / (2.0 * h);
        const Block id = Block::Identity();
        const cplx i(0.0, 1.0);

        BlockTridiagonalMatrix<4> op(n);
        for (std::size_t p = 0; p < n; ++p)
        {
            const double r = grid.r(p);
            LocalCoefficients lc;
            if (mode == ClosedMode::piecewise)
            {
                const double w = ctx.interactions ? inside_fraction(r, h, ctx.rb_bar) : 0.0;
                lc = {(1.0 - w) * i / ctx.vbar, (-w * ctx.dinv1) * id};
            }
            else
            {
                lc = smooth_coefficients(ctx, ctx.potential(std::abs(r)));
            }
            // Op = -H; the diagonal is exactly -2 times the kinetic off-diagonal
            // so constants are annihilated without rounding.
            op.sub[p] = -(off * id - lc.c * so);
            op.super[p] = -(off * id + lc.c * so);
            op.diag[p] = -(-2.0 * off * id + lc.k);
        }
        return op;
    }

    std::optional<PairResonance> pair_resonance(const DerivedContext& ctx, double delta)
    {
        if (!(delta > 0.0) || !ctx.interactions)
            return std::nullopt;
        const double radius = std::pow(2.0 * delta * ctx.c6 / ctx.vbar, 1.0 / 6.0);
        return PairResonance{radius, radius / (12.0 * delta)};
    }

    void check_closed_grid(const DerivedContext& ctx, const ComRelGrid& grid, ClosedMode mode, double delta)
    {
        if (grid.size() < 3)
            throw GridRefinementError("relative grid needs at least 3 nodes");
        if (ctx.interactions && ctx.rb_bar / grid.hr < 8.0)
            throw GridRefinementError("hr = " + std::to_string(grid.hr) + " resolves the blockade radius "
                                      + std::to_string(ctx.rb_bar) + " with fewer than 8 cells; refine hr");
        if (mode == ClosedMode::smooth)
            if (const auto res = pair_resonance(ctx, delta); res && res->width / grid.hr < 4.0)
                throw GridRefinementError("hr = " + std::to_string(grid.hr) + " places fewer than 4 nodes in the pair "
                                          "resonance at r = " + std::to_string(res->radius) + " (width "
                                          + std::to_string(res->width) + "); refine hr to <= "
                                          + std::to_string(res->width / 4.0));
    }

    double profile_norm(const ClosedProfile& profile, double hr)
    {
        double s = 0.0;
        for (const auto& b : profile)
            s += b.squaredNorm();
        return std::sqrt(s * hr);
    }

    ClosedSolution solve_closed(const SchemeParams& params, const ComRelGrid& grid, const ClosedOptions& options)
    {
        if (params.delta1 != params.delta2)
            throw PreconditionError("closed equation requires delta1 == delta2");
        const DerivedContext ctx = make_context(params);
        check_closed_grid(ctx, grid, options.mode, params.delta1);

        const std::size_t n = grid.size();
        const double a2 = params.amplitude * params.amplitude;
        PairField edge = PairField::Zero();
        edge(0, 0) = a2;
        if (options.boundary)
            edge = *options.boundary;

        // March the deviation from the edge value so that a constant solution
        // is reproduced without rounding drift: psi = Phi - edge obeys
        // d_R psi = i Op psi + i Op edge, with Op edge from the row sums.
        const BlockVector<4> base = flatten(edge);
        ClosedProfile psi(n, BlockVector<4>::Zero());
        if (options.initial)
        {
            if (options.initial->size() != n)
                throw PreconditionError("initial profile length does not match the relative grid");
            for (std::size_t p = 1; p + 1 < n; ++p)
                psi[p] = flatten((*options.initial)[p]) - base;
        }

        const BlockTridiagonalMatrix<4> op = closed_generator(ctx, grid, options.mode, options.lossless);
        ClosedProfile forcing(n, BlockVector<4>::Zero());
        for (std::size_t p = 1; p + 1 < n; ++p)
            forcing[p] = cplx(0.0, 1.0) * ((op.sub[p] + op.diag[p] + op.super[p]) * base);
        const CrankNicolsonStepper<4> stepper(op, grid.hR);

        auto full = [&] {
            ClosedProfile out(psi);
            for (auto& b : out)
                b += base;
            return out;
        };

        ClosedSolution sol{grid, params, options.mode, {}, {}};
        const double norm0 = options.lossless ? profile_norm(full(), grid.hr) : 0.0;
        for (std::size_t s = 1; s <= grid.steps; ++s)
        {
            stepper.step(psi, forcing);
            if (options.lossless && norm0 > 0.0 && profile_norm(full(), grid.hr) > 10.0 * norm0)
                throw GridRefinementError("norm grew more than 10x by R = " + std::to_string(grid.R(s))
                                          + " in lossless mode; refine hr and hR");
            if (options.snapshot_stride != 0 && s % options.snapshot_stride == 0 && s != grid.steps)
            {
                sol.snapshot_R.push_back(grid.R(s));
                sol.snapshots.push_back(full());
            }
        }
        ClosedProfile field = full();
        for (const auto& b : field)
            if (!b.allFinite())
                throw NumericalError("non-finite value in the relative profile at R = alpha");
        sol.snapshot_R.push_back(grid.R(grid.steps));
        sol.snapshots.push_back(std::move(field));
        return sol;
    }

    Eigen::Matrix2d g2_at_zero(const ClosedSolution& sol)
    {
        const double a2 = sol.params.amplitude * sol.params.amplitude;
        const PairField phi = unflatten(sol.final_profile()[sol.grid.center()]);
        return phi.cwiseAbs2() / (a2 * a2);
    }

    bool SweepTable::all_ok() const
    {
        return std::none_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.error.has_value(); });
    }

    SweepTable sweep_detuning(const SchemeParams& params, const std::vector<double>& deltas,
                              const ComRelGrid& grid, const ClosedOptions& options, unsigned threads)
    {
        for (double d : deltas)
            if (!std::isfinite(d))
                throw PreconditionError("sweep detunings must be finite");
        std::vector<SweepRow> rows(deltas.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t idx = next++; idx < deltas.size(); idx = next++)
            {
                SweepRow& row = rows[idx];
                row.delta = deltas[idx];
                try
                {
                    SchemeParams p = params;
                    p.delta1 = p.delta2 = row.delta;
                    row.g = g2_at_zero(solve_closed(p, grid, options));
                }
                catch (const std::exception& e)
                {
                    row.error = e.what();
                }
            }
        };
        const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(deltas.size())));
        if (count == 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < count; ++t)
                pool.emplace_back(worker);
        }
        std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.delta < b.delta; });
        return {std::move(rows)};
    }

    std::vector<double> default_sweep_detunings()
    {
        std::vector<double> d;
        for (int k = -16; k <= 16; ++k)
            d.push_back(0.25 * k);
        return d;
    }

    EffectiveDiagnostics effective_diagnostics(const SchemeParams& params)
    {
        if (params.delta1 != params.delta2)
            throw PreconditionError("effective diagnostics require delta1 == delta2");
        if (params.delta1 == 0.0)
            throw PreconditionError("effective mass and potential are undefined at delta = 0");
        return {1.0 / (16.0 * params.delta1), 1.0 / (2.0 * params.delta1)};
    }
}
