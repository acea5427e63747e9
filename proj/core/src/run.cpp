#include "rydpol/run.hpp"

#include <array>
#include <cmath>
#include <future>
#include <limits>

#include <fmt/format.h>

#include "rydpol/error.hpp"
#include "rydpol/ladder.hpp"
#include "rydpol/numerics.hpp"

namespace rydpol
{
    namespace
    {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();

        std::vector<std::string> base_provenance(const RunConfig& config, Command command)
        {
            return {fmt::format("rydpol {}", library_version()),
                    fmt::format("command {}", to_string(command)),
                    fmt::format("config fnv1a64={}", fnv1a_hex(serialize_config(config)))};
        }

        ComRelGrid scaled_relative_grid(const RunConfig& c, double scale)
        {
            return ComRelGrid::make(c.params.alpha, c.hr / scale, c.hR / scale);
        }

        TwoPointGrid scaled_two_point_grid(const RunConfig& c, double scale)
        {
            const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(c.n - 1) * scale)) + 1;
            return TwoPointGrid::over(c.params.alpha, n);
        }

        std::string describe(const ComRelGrid& g)
        {
            return fmt::format("grid hr={:.9g} hR={:.9g} r_nodes={} R_steps={} hR/hr^2={:.9g}", g.hr, g.hR,
                               g.size(), g.steps, g.stability_ratio());
        }

        std::string describe(const TwoPointGrid& g)
        {
            return fmt::format("grid n={} h={:.9g}", g.n, g.h);
        }

        ClosedOptions closed_options(const RunConfig& c)
        {
            ClosedOptions o;
            o.mode = c.mode;
            o.lossless = c.lossless;
            return o;
        }

        void require(bool ok, const std::string& what)
        {
            if (!ok)
                throw ConfigError("solver", what);
        }

        double pair_norm(const SchemeParams& p, InputBeams beams, int j, int l)
        {
            const double in = std::norm(input_pair_amplitude(beams, p.amplitude)(j, l));
            const double a2 = p.amplitude * p.amplitude;
            return in > 0.0 ? in : a2 * a2;
        }

        // Phi_EE on the two-point grid from either two-point solver.
        FieldGrid two_point_ee(const RunConfig& c, const TwoPointGrid& grid, bool include_vc, double c_ratio)
        {
            if (c.solver == Solver::ladder2)
            {
                const LadderSolution sol = solve_double_ladder(c.params, grid, c.beams);
                FieldGrid ee(grid.n);
                for (std::size_t i = 0; i < grid.n; ++i)
                    for (std::size_t k = 0; k < grid.n; ++k)
                        ee(i, k) = sol.ee(i, k);
                return ee;
            }
            SchemeParams p = c.params;
            p.c_ratio = c_ratio;
            return solve_full(p, grid, EdgeSpec::dark_state(input_pair_amplitude(c.beams, p.amplitude)),
                              {include_vc}).ee;
        }

        void refinement_warning(const FieldGrid& coarse, const FieldGrid& fine, ExecutionResult& result,
                                std::vector<std::string>& provenance)
        {
            const double change = refinement_change(coarse, fine);
            provenance.push_back(fmt::format("refinement_change {:.9g}", change));
            if (change > coarse_grid_threshold)
                result.messages.push_back(fmt::format(
                    "warning: grid too coarse, Phi_EE changes by {:.3g} (> {:.0f}%) under one refinement", change,
                    100.0 * coarse_grid_threshold));
        }

        ExecutionResult run_sweep(const RunConfig& c, const ExecuteOptions& o)
        {
            require(c.solver == Solver::equal, "the sweep command needs solver 'equal'");
            const ComRelGrid grid = scaled_relative_grid(c, o.grid_scale);
            const SweepTable table = sweep_detuning(c.params, c.sweep.detunings(), grid, closed_options(c), o.threads);

            ExecutionResult result;
            OutputTable out{"sweep", {"delta", "g11", "g22", "g12", "g21"}, {}, base_provenance(c, Command::sweep)};
            out.provenance.push_back(fmt::format("mode {}{}", to_string(c.mode), c.lossless ? " lossless" : ""));
            out.provenance.push_back(describe(grid));
            for (const auto& row : table.rows)
            {
                if (row.error)
                {
                    out.rows.push_back({row.delta, nan, nan, nan, nan});
                    out.provenance.push_back(fmt::format("failed delta={:.9g}: {}", row.delta, *row.error));
                    result.messages.push_back(fmt::format("delta={:.9g}: {}", row.delta, *row.error));
                    result.exit_code = 2;
                    continue;
                }
                out.rows.push_back({row.delta, row.g(0, 0), row.g(1, 1), row.g(0, 1), row.g(1, 0)});
            }
            result.tables.push_back(std::move(out));
            return result;
        }

        ExecutionResult run_map(const RunConfig& c, const ExecuteOptions& o)
        {
            require(c.solver == Solver::ladder2 || c.solver == Solver::full,
                    "the map command needs solver 'ladder2' or 'full'");
            const TwoPointGrid grid = scaled_two_point_grid(c, o.grid_scale);
            const FieldGrid ee = two_point_ee(c, grid, c.include_vc, c.params.c_ratio);
            const FieldGrid fine = two_point_ee(c, grid.refined(2), c.include_vc, c.params.c_ratio);

            ExecutionResult result;
            std::vector<std::string> prov = base_provenance(c, Command::map);
            prov.push_back(describe(grid));
            refinement_warning(ee, fine, result, prov);
            const std::size_t stride = c.map_stride != 0 ? c.map_stride : (grid.n - 1 + 299) / 300;
            prov.push_back(fmt::format("map_stride {}", stride));
            for (const auto& [j1, l1] : c.components)
            {
                const int j = j1 - 1;
                const int l = l1 - 1;
                const double norm = pair_norm(c.params, c.beams, j, l);
                OutputTable t{fmt::format("map_{}{}", j1, l1), {"z", "zp", "value"}, {}, prov};
                t.provenance.push_back(fmt::format("component ({},{}) |Phi_EE|^2 / {:.9g}", j1, l1, norm));
                for (std::size_t i = 0; i < grid.n; i += stride)
                    for (std::size_t k = 0; k < grid.n; k += stride)
                        t.rows.push_back({grid.coord(i), grid.coord(k), std::norm(ee(i, k)(j, l)) / norm});
                result.tables.push_back(std::move(t));
            }
            return result;
        }

        ExecutionResult run_full_validate(const RunConfig& c, const ExecuteOptions& o)
        {
            require(c.solver == Solver::full, "the full-validate command needs solver 'full'");
            const TwoPointGrid grid = scaled_two_point_grid(c, o.grid_scale);
            const EdgeSpec bc = EdgeSpec::dark_state(input_pair_amplitude(c.beams, c.params.amplitude));

            struct Case
            {
                bool vc;
                double c_ratio;
            };
            std::vector<Case> cases{{false, c.params.c_ratio}};
            if (c.include_vc)
            {
                if (c.c_ratios.empty())
                    cases.push_back({true, c.params.c_ratio});
                for (double cr : c.c_ratios)
                    cases.push_back({true, cr});
            }

            ExecutionResult result;
            OutputTable out{"full_validate", {"include_vc", "c_ratio", "residual"}, {}, base_provenance(c, Command::full_validate)};
            out.provenance.push_back(describe(grid));
            FieldGrid baseline;
            for (const Case& k : cases)
            {
                SchemeParams p = c.params;
                p.c_ratio = k.c_ratio;
                const FullSolution sol = solve_full(p, grid, bc, {k.vc});
                out.rows.push_back({k.vc ? 1.0 : 0.0, k.c_ratio, validate_ee_approx(sol)});
                if (!k.vc && baseline.n() == 0)
                    baseline = sol.ee;
            }
            refinement_warning(baseline, two_point_ee(c, grid.refined(2), false, c.params.c_ratio), result,
                               out.provenance);
            result.tables.push_back(std::move(out));
            return result;
        }

        ExecutionResult run_converge(const RunConfig& c, const ExecuteOptions& o)
        {
            constexpr std::size_t factor = 2;
            std::vector<std::string> prov = base_provenance(c, Command::converge);
            OutputTable levels{"convergence", {}, {}, prov};
            std::array<Eigen::Matrix2d, 3> values;

            if (c.solver == Solver::equal)
            {
                const ComRelGrid g0 = scaled_relative_grid(c, o.grid_scale);
                levels.columns = {"level", "hr", "hR", "g11", "g22", "g12", "g21"};
                levels.provenance.push_back(fmt::format("mode {} delta={:.9g}", to_string(c.mode), c.params.delta1));
                std::array<ComRelGrid, 3> grids{g0, g0.refined(factor), g0.refined(factor * factor)};
                std::array<std::future<Eigen::Matrix2d>, 3> jobs;
                const auto policy = o.threads > 1 ? std::launch::async : std::launch::deferred;
                for (std::size_t lvl = 0; lvl < 3; ++lvl)
                    jobs[lvl] = std::async(policy, [&, lvl] { return g2_at_zero(solve_closed(c.params, grids[lvl], closed_options(c))); });
                for (std::size_t lvl = 0; lvl < 3; ++lvl)
                {
                    values[lvl] = jobs[lvl].get();
                    const auto& g = values[lvl];
                    levels.rows.push_back({double(lvl), grids[lvl].hr, grids[lvl].hR, g(0, 0), g(1, 1), g(0, 1), g(1, 0)});
                }
            }
            else
            {
                const TwoPointGrid g0 = scaled_two_point_grid(c, o.grid_scale);
                levels.columns = {"level", "h", "g11", "g22", "g12", "g21"};
                levels.provenance.push_back("value |Phi_EE(alpha, alpha)|^2 normalised to the input pair intensity");
                std::array<TwoPointGrid, 3> grids{g0, g0.refined(factor), g0.refined(factor * factor)};
                for (std::size_t lvl = 0; lvl < 3; ++lvl)
                {
                    const FieldGrid ee = two_point_ee(c, grids[lvl], c.include_vc, c.params.c_ratio);
                    const PairField& out = ee(grids[lvl].n - 1, grids[lvl].n - 1);
                    for (int j = 0; j < 2; ++j)
                        for (int l = 0; l < 2; ++l)
                            values[lvl](j, l) = std::norm(out(j, l)) / pair_norm(c.params, c.beams, j, l);
                    const auto& g = values[lvl];
                    levels.rows.push_back({double(lvl), grids[lvl].h, g(0, 0), g(1, 1), g(0, 1), g(1, 0)});
                }
            }

            OutputTable order{"order", {"j", "l", "coarse", "medium", "fine", "order", "extrapolated"}, {}, prov};
            order.provenance.push_back(fmt::format("refinement ratio {}; order is nan when the values agree to 1e-14", factor));
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l)
                {
                    const ConvergenceReport r = estimate_order(values[0](j, l), values[1](j, l), values[2](j, l),
                                                               static_cast<double>(factor));
                    order.rows.push_back({double(j + 1), double(l + 1), r.coarse, r.medium, r.fine,
                                          r.order.value_or(nan), r.extrapolated});
                }
            ExecutionResult result;
            result.tables.push_back(std::move(levels));
            result.tables.push_back(std::move(order));
            return result;
        }
    }

    Command command_from_string(const std::string& name)
    {
        if (name == "sweep")
            return Command::sweep;
        if (name == "map")
            return Command::map;
        if (name == "full-validate")
            return Command::full_validate;
        if (name == "converge")
            return Command::converge;
        throw PreconditionError("unknown command '" + name + "'");
    }

    const char* to_string(Command c)
    {
        switch (c)
        {
        case Command::sweep: return "sweep";
        case Command::map: return "map";
        case Command::full_validate: return "full-validate";
        case Command::converge: return "converge";
        }
        return "?";
    }

    std::string library_version()
    {
        return RYDPOL_VERSION;
    }

    ExecutionResult execute(Command command, const RunConfig& config, const ExecuteOptions& options)
    {
        if (!(options.grid_scale > 0.0) || !std::isfinite(options.grid_scale))
            throw PreconditionError("grid scale must be positive");
        switch (command)
        {
        case Command::sweep: return run_sweep(config, options);
        case Command::map: return run_map(config, options);
        case Command::full_validate: return run_full_validate(config, options);
        case Command::converge: return run_converge(config, options);
        }
        throw PreconditionError("unknown command");
    }
}
