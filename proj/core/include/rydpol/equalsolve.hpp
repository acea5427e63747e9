#pragma once

// Closed propagation equation for equal one-photon detunings in centre-of-mass
// R = (z + z')/2 and relative r = z - z' coordinates:
//
//   i d_R Phi = -4 dtilde d_r^2 Phi + c(r) (I (x) v - v (x) I) d_r Phi + K(r) Phi
//
// with c(r) = i / (vbar - dtilde V) and K(r) = V A / (vbar - dtilde V). R plays
// the role of time; the r-profile is marched with Crank-Nicolson steps.
//
// Piecewise mode keeps only the blockade limit (K = -1/dtilde, no spin-orbit
// term) for |r| < rb_bar and only the free spin-orbit form (c = i/vbar, K = 0)
// outside. Smooth mode evaluates both coefficients from V(r) = C6/r^6.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rydpol/closure.hpp"
#include "rydpol/model.hpp"
#include "rydpol/numerics.hpp"

namespace rydpol
{
    enum class ClosedMode
    {
        piecewise,
        smooth
    };

    const char* to_string(ClosedMode mode);
    ClosedMode closed_mode_from_string(const std::string& name);

    struct ComRelGrid
    {
        double alpha = 30.0;
        double hr = 0.02;
        double hR = 0.01;
        // Nodes r_i = (i - half) hr for i in [0, 2 half]; r = 0 is node `half`.
        std::size_t half = 1500;
        // R steps from 0 to alpha.
        std::size_t steps = 3000;

        // Steps are adjusted to divide alpha exactly.
        static ComRelGrid make(double alpha, double hr = 0.02, double hR = 0.01);

        std::size_t size() const { return 2 * half + 1; }
        std::size_t center() const { return half; }
        double r(std::size_t i) const { return (static_cast<double>(i) - static_cast<double>(half)) * hr; }
        double R(std::size_t s) const { return static_cast<double>(s) * hR; }
        // hR / hr^2, recorded with every run.
        double stability_ratio() const { return hR / (hr * hr); }
        ComRelGrid refined(std::size_t factor) const;
    };

    using ClosedProfile = std::vector<BlockVector<4>>;

    struct ClosedOptions
    {
        ClosedMode mode = ClosedMode::piecewise;
        // Real kinetic coefficient 2 delta instead of dtilde.
        bool lossless = false;
        // Store every n-th R profile (0: only the final one).
        std::size_t snapshot_stride = 0;
        // Value held at r = +-alpha; defaults to a^2 on the (1,1) component.
        std::optional<PairField> boundary;
        // Profile at R = 0; defaults to the boundary value at every node.
        std::optional<std::vector<PairField>> initial;
    };

    struct ClosedSolution
    {
        ComRelGrid grid;
        SchemeParams params;
        ClosedMode mode = ClosedMode::piecewise;
        std::vector<double> snapshot_R;
        std::vector<ClosedProfile> snapshots;

        const ClosedProfile& final_profile() const { return snapshots.back(); }
        PairField at(std::size_t snapshot, std::size_t i) const;
    };

    // Right-hand-side operator Op = -H of i d_R Phi = H Phi on the r-grid.
    BlockTridiagonalMatrix<4> closed_generator(const DerivedContext& ctx, const ComRelGrid& grid,
                                               ClosedMode mode, bool lossless = false);

    // Fraction of the cell [r - hr/2, r + hr/2] lying inside |r| < radius.
    double inside_fraction(double r, double hr, double radius);

    // Radius where Re(vbar - dtilde V) vanishes (positive detuning only) and the
    // half-width of the resulting resonance.
    struct PairResonance
    {
        double radius;
        double width;
    };
    std::optional<PairResonance> pair_resonance(const DerivedContext& ctx, double delta);

    // Throws GridRefinementError if the grid cannot resolve rb_bar with 8
    // cells or (smooth mode) the pair resonance with 4 nodes.
    void check_closed_grid(const DerivedContext& ctx, const ComRelGrid& grid, ClosedMode mode, double delta);

    ClosedSolution solve_closed(const SchemeParams& params, const ComRelGrid& grid, const ClosedOptions& options = {});

    double profile_norm(const ClosedProfile& profile, double hr);

    // |Phi_jl(R = alpha, r = 0)|^2 / a^4.
    Eigen::Matrix2d g2_at_zero(const ClosedSolution& sol);

    struct SweepRow
    {
        double delta = 0.0;
        Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
        // Set when this row's solve failed; g is then meaningless.
        std::optional<std::string> error;
    };

    struct SweepTable
    {
        std::vector<SweepRow> rows;

        bool all_ok() const;
    };

    // One independent solve per detuning (delta1 = delta2 = delta), run on up
    // to `threads` workers; rows come back sorted by delta.
    SweepTable sweep_detuning(const SchemeParams& params, const std::vector<double>& deltas,
                              const ComRelGrid& grid, const ClosedOptions& options = {},
                              unsigned threads = 1);

    std::vector<double> default_sweep_detunings();

    struct EffectiveDiagnostics
    {
        double mass;
        double potential;
    };

    // Photon effective mass 1/(16 delta) and potential 1/(2 delta) for delta1 = delta2.
    EffectiveDiagnostics effective_diagnostics(const SchemeParams& params);
}
