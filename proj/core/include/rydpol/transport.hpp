#pragma once

// Explicit march of coupled first-order transport equations on the square
// (z, z') grid of the two-excitation wave functions.
//
// Three pair fields live on every node:
//   along_z    transported by d/dz          (Phi^Es)
//   along_zp   transported by d/dz'         (Phi^sE)
//   along_diag transported by d/dz + d/dz'  (Phi_EE)
// Each is advanced with Heun's predictor-corrector along its own
// characteristic. Node (i, k) depends only on (i-1, k), (i, k-1) and
// (i-1, k-1), so a single causal sweep suffices.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rydpol/closure.hpp"

namespace rydpol
{
    struct TwoPointGrid
    {
        std::size_t n = 2;
        double h = 1.0;

        // n nodes per axis spanning [0, extent].
        static TwoPointGrid over(double extent, std::size_t n);

        double coord(std::size_t i) const { return static_cast<double>(i) * h; }
        double extent() const { return coord(n - 1); }
        // Grid with the step refined by the given factor (> 1 refines).
        TwoPointGrid refined(std::size_t factor) const;
    };

    struct TransportState
    {
        PairField along_z = PairField::Zero();
        PairField along_zp = PairField::Zero();
        PairField along_diag = PairField::Zero();
    };

    // Imposed data. along_z is fixed on the z = 0 edge, along_zp on the z' = 0
    // edge and along_diag on both. Each vector holds n entries indexed by the
    // free coordinate along its edge.
    struct TransportEdges
    {
        std::vector<PairField> along_z_at_z0;
        std::vector<PairField> along_zp_at_zp0;
        std::vector<PairField> diag_at_z0;
        std::vector<PairField> diag_at_zp0;

        static TransportEdges uniform(std::size_t n, const PairField& along_z, const PairField& along_zp,
                                      const PairField& diag);
    };

    // Derivatives of the three fields along their characteristics at node (i, k).
    using TransportRhs = std::function<TransportState(std::size_t i, std::size_t k, const TransportState&)>;
    // Receives each finished row i (all k) in increasing i.
    using TransportSink = std::function<void(std::size_t i, std::span<const TransportState>)>;

    // Throws NumericalError naming the node if a non-finite value appears.
    void march_transport(const TwoPointGrid& grid, const TransportEdges& edges,
                         const TransportRhs& rhs, const TransportSink& sink);

    // Row-major n x n storage of one pair field.
    class FieldGrid
    {
    public:
        FieldGrid() = default;
        explicit FieldGrid(std::size_t n) : m_n(n), m_data(n * n, PairField::Zero()) {}

        std::size_t n() const { return m_n; }
        PairField& operator()(std::size_t i, std::size_t k) { return m_data[i * m_n + k]; }
        const PairField& operator()(std::size_t i, std::size_t k) const { return m_data[i * m_n + k]; }

    private:
        std::size_t m_n = 0;
        std::vector<PairField> m_data;
    };
}
