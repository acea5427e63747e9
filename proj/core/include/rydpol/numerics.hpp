#pragma once

// Banded block linear algebra, Crank-Nicolson stepping and convergence-order
// estimation shared by the solvers.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydpol/error.hpp"

namespace rydpol
{
    template <int B>
    using BlockMatrix = Eigen::Matrix<std::complex<double>, B, B>;
    template <int B>
    using BlockVector = Eigen::Matrix<std::complex<double>, B, 1>;

    // Rows of a block-tridiagonal matrix. sub[0] and super[n-1] are ignored.
    template <int B>
    struct BlockTridiagonalMatrix
    {
        std::vector<BlockMatrix<B>> sub;
        std::vector<BlockMatrix<B>> diag;
        std::vector<BlockMatrix<B>> super;

        BlockTridiagonalMatrix() = default;
        explicit BlockTridiagonalMatrix(std::size_t n)
            : sub(n, BlockMatrix<B>::Zero()), diag(n, BlockMatrix<B>::Zero()), super(n, BlockMatrix<B>::Zero()) {}

        std::size_t size() const { return diag.size(); }

        std::vector<BlockVector<B>> apply(std::span<const BlockVector<B>> x) const
        {
            const std::size_t n = size();
            std::vector<BlockVector<B>> y(n);
            for (std::size_t i = 0; i < n; ++i)
            {
                BlockVector<B> acc = diag[i] * x[i];
                if (i > 0)
                    acc.noalias() += sub[i] * x[i - 1];
                if (i + 1 < n)
                    acc.noalias() += super[i] * x[i + 1];
                y[i] = acc;
            }
            return y;
        }
    };

    template <int B>
    struct BandedBlockSystem
    {
        BlockTridiagonalMatrix<B> matrix;
        std::vector<BlockVector<B>> rhs;
    };

    // Block Thomas factorization, reusable across right-hand sides.
    template <int B>
    class BlockTridiagonalFactor
    {
    public:
        static constexpr double max_condition = 1e12;

        explicit BlockTridiagonalFactor(const BlockTridiagonalMatrix<B>& m)
        {
            const std::size_t n = m.size();
            if (n == 0 || m.sub.size() != n || m.super.size() != n)
                throw PreconditionError("block-tridiagonal system has inconsistent dimensions");
            m_sub = m.sub;
            m_pivots.reserve(n);
            m_upper.resize(n);
            for (std::size_t i = 0; i < n; ++i)
            {
                BlockMatrix<B> pivot = m.diag[i];
                if (i > 0)
                    pivot.noalias() -= m.sub[i] * m_upper[i - 1];
                m_pivots.emplace_back(pivot);
                const double rcond = m_pivots.back().rcond();
                if (!(rcond * max_condition >= 1.0))
                    throw SingularSystemError("singular pivot block at row " + std::to_string(i));
                if (i + 1 < n)
                    m_upper[i] = m_pivots.back().solve(m.super[i]);
                else
                    m_upper[i].setZero();
            }
        }

        std::size_t size() const { return m_pivots.size(); }

        void solve_in_place(std::span<BlockVector<B>> x) const
        {
            const std::size_t n = size();
            for (std::size_t i = 0; i < n; ++i)
            {
                BlockVector<B> r = x[i];
                if (i > 0)
                    r.noalias() -= m_sub[i] * x[i - 1];
                x[i] = m_pivots[i].solve(r);
            }
            for (std::size_t i = n - 1; i-- > 0;)
                x[i].noalias() -= m_upper[i] * x[i + 1];
        }

        std::vector<BlockVector<B>> solve(std::span<const BlockVector<B>> rhs) const
        {
            std::vector<BlockVector<B>> x(rhs.begin(), rhs.end());
            solve_in_place(x);
            return x;
        }

    private:
        std::vector<BlockMatrix<B>> m_sub;
        std::vector<Eigen::PartialPivLU<BlockMatrix<B>>> m_pivots;
        std::vector<BlockMatrix<B>> m_upper;
    };

    template <int B>
    std::vector<BlockVector<B>> block_tridiagonal_solve(const BandedBlockSystem<B>& sys)
    {
        if (sys.rhs.size() != sys.matrix.size())
            throw PreconditionError("right-hand side length does not match the system");
        return BlockTridiagonalFactor<B>(sys.matrix).solve(sys.rhs);
    }

    // Trapezoidal update (I - i h/2 Op) new = (I + i h/2 Op) old for
    // dPhi/dR = i Op Phi, with Dirichlet values held at the first and last node.
    // The factorization is built once; Op is assumed independent of R.
    template <int B>
    class CrankNicolsonStepper
    {
    public:
        CrankNicolsonStepper(const BlockTridiagonalMatrix<B>& op, double h)
            : m_h(h), m_explicit(shifted(op, h, +1.0)), m_implicit(shifted(op, h, -1.0)) {}

        // Advances field by one step. Edge entries are left unchanged.
        void step(std::vector<BlockVector<B>>& field) const { step(field, {}); }

        // Same with a constant forcing f: dPhi/dR = i Op Phi + f (interior rows).
        void step(std::vector<BlockVector<B>>& field, std::span<const BlockVector<B>> forcing) const
        {
            const std::size_t n = field.size();
            std::vector<BlockVector<B>> rhs = m_explicit.apply(field);
            if (!forcing.empty())
                for (std::size_t i = 1; i + 1 < n; ++i)
                    rhs[i].noalias() += m_h * forcing[i];
            rhs[0] = field[0];
            rhs[n - 1] = field[n - 1];
            m_implicit.solve_in_place(rhs);
            field.swap(rhs);
        }

    private:
        static BlockTridiagonalMatrix<B> shifted(const BlockTridiagonalMatrix<B>& op, double h, double sign)
        {
            const std::size_t n = op.size();
            if (n < 3)
                throw PreconditionError("Crank-Nicolson stepping needs at least 3 nodes");
            const std::complex<double> c(0.0, sign * 0.5 * h);
            BlockTridiagonalMatrix<B> m(n);
            for (std::size_t i = 0; i < n; ++i)
            {
                m.sub[i] = c * op.sub[i];
                m.diag[i] = c * op.diag[i] + BlockMatrix<B>::Identity();
                m.super[i] = c * op.super[i];
            }
            // Dirichlet rows.
            for (std::size_t i : {std::size_t{0}, n - 1})
            {
                m.sub[i].setZero();
                m.super[i].setZero();
                m.diag[i].setIdentity();
            }
            return m;
        }

        double m_h;
        BlockTridiagonalMatrix<B> m_explicit;
        BlockTridiagonalFactor<B> m_implicit;
    };

    template <int B>
    std::vector<BlockVector<B>> implicit_step(const BlockTridiagonalMatrix<B>& op,
                                              std::span<const BlockVector<B>> field, double h)
    {
        std::vector<BlockVector<B>> out(field.begin(), field.end());
        CrankNicolsonStepper<B>(op, h).step(out);
        return out;
    }

    struct ConvergenceReport
    {
        double coarse = 0.0;
        double medium = 0.0;
        double fine = 0.0;
        double ratio = 2.0;
        // Empty when successive differences are indistinguishable from zero.
        std::optional<double> order;
        double extrapolated = 0.0;

        bool converged() const { return !order.has_value(); }
    };

    // Observed order from three values at steps h, h/ratio, h/ratio^2 plus the
    // Richardson-extrapolated limit.
    ConvergenceReport estimate_order(double coarse, double medium, double fine, double ratio = 2.0);
}
