#include "rydpol/transport.hpp"

#include <cmath>
#include <string>

#include "rydpol/error.hpp"

namespace rydpol
{
    namespace
    {
        bool all_finite(const TransportState& s)
        {
            return s.along_z.allFinite() && s.along_zp.allFinite() && s.along_diag.allFinite();
        }
    }

    TwoPointGrid TwoPointGrid::over(double extent, std::size_t n)
    {
        if (n < 2)
            throw PreconditionError("two-point grid needs at least 2 nodes per axis");
        if (!(extent > 0.0))
            throw PreconditionError("two-point grid extent must be positive");
        return {n, extent / static_cast<double>(n - 1)};
    }

    TwoPointGrid TwoPointGrid::refined(std::size_t factor) const
    {
        return {(n - 1) * factor + 1, h / static_cast<double>(factor)};
    }

    TransportEdges TransportEdges::uniform(std::size_t n, const PairField& along_z, const PairField& along_zp,
                                           const PairField& diag)
    {
        return {std::vector<PairField>(n, along_z), std::vector<PairField>(n, along_zp),
                std::vector<PairField>(n, diag), std::vector<PairField>(n, diag)};
    }

    void march_transport(const TwoPointGrid& grid, const TransportEdges& edges,
                         const TransportRhs& rhs, const TransportSink& sink)
    {
        const std::size_t n = grid.n;
        if (edges.along_z_at_z0.size() != n || edges.along_zp_at_zp0.size() != n
            || edges.diag_at_z0.size() != n || edges.diag_at_zp0.size() != n)
            throw PreconditionError("edge data length does not match the grid");
        const double h = grid.h;

        std::vector<TransportState> prev(n), cur(n);
        std::vector<TransportState> prev_rate(n), cur_rate(n);

        auto check = [](std::size_t i, std::size_t k, const TransportState& s) {
            if (!all_finite(s))
                throw NumericalError("non-finite value at node (" + std::to_string(i) + ", "
                                     + std::to_string(k) + ")");
        };

        for (std::size_t i = 0; i < n; ++i)
        {
            for (std::size_t k = 0; k < n; ++k)
            {
                TransportState s;
                if (i == 0 && k == 0)
                {
                    s.along_z = edges.along_z_at_z0[0];
                    s.along_zp = edges.along_zp_at_zp0[0];
                    s.along_diag = edges.diag_at_z0[0];
                }
                else if (i == 0)
                {
                    // z = 0 edge: only along_zp evolves, along k.
                    const TransportState& back = cur[k - 1];
                    const TransportState& back_rate = cur_rate[k - 1];
                    s.along_z = edges.along_z_at_z0[k];
                    s.along_diag = edges.diag_at_z0[k];
                    s.along_zp = back.along_zp + h * back_rate.along_zp;
                    const TransportState r = rhs(i, k, s);
                    s.along_zp = back.along_zp + 0.5 * h * (back_rate.along_zp + r.along_zp);
                }
                else if (k == 0)
                {
                    // z' = 0 edge: only along_z evolves, along i.
                    const TransportState& back = prev[0];
                    const TransportState& back_rate = prev_rate[0];
                    s.along_zp = edges.along_zp_at_zp0[i];
                    s.along_diag = edges.diag_at_zp0[i];
                    s.along_z = back.along_z + h * back_rate.along_z;
                    const TransportState r = rhs(i, k, s);
                    s.along_z = back.along_z + 0.5 * h * (back_rate.along_z + r.along_z);
                }
                else
                {
                    const TransportState& bz = prev[k];
                    const TransportState& bzr = prev_rate[k];
                    const TransportState& bzp = cur[k - 1];
                    const TransportState& bzpr = cur_rate[k - 1];
                    const TransportState& bd = prev[k - 1];
                    const TransportState& bdr = prev_rate[k - 1];
                    s.along_z = bz.along_z + h * bzr.along_z;
                    s.along_zp = bzp.along_zp + h * bzpr.along_zp;
                    s.along_diag = bd.along_diag + h * bdr.along_diag;
                    const TransportState r = rhs(i, k, s);
                    s.along_z = bz.along_z + 0.5 * h * (bzr.along_z + r.along_z);
                    s.along_zp = bzp.along_zp + 0.5 * h * (bzpr.along_zp + r.along_zp);
                    s.along_diag = bd.along_diag + 0.5 * h * (bdr.along_diag + r.along_diag);
                }
                check(i, k, s);
                cur[k] = s;
                cur_rate[k] = rhs(i, k, s);
            }
            sink(i, cur);
            std::swap(prev, cur);
            std::swap(prev_rate, cur_rate);
        }
    }
}
