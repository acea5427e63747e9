#include "doctest.h"

#include <cmath>
#include <random>

#include "rydpol/numerics.hpp"

using namespace rydpol;

namespace
{
    template <int B>
    BlockTridiagonalMatrix<B> random_system(std::mt19937_64& rng, std::size_t n, double dominance)
    {
        std::normal_distribution<double> g;
        auto block = [&] {
            BlockMatrix<B> m;
            for (int i = 0; i < B; ++i)
                for (int j = 0; j < B; ++j)
                    m(i, j) = {g(rng), g(rng)};
            return m;
        };
        BlockTridiagonalMatrix<B> a(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            a.sub[i] = block();
            a.super[i] = block();
            a.diag[i] = block() + dominance * BlockMatrix<B>::Identity();
        }
        return a;
    }

    template <int B>
    Eigen::MatrixXcd dense(const BlockTridiagonalMatrix<B>& a)
    {
        const auto n = static_cast<Eigen::Index>(a.size());
        Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n * B, n * B);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            d.block<B, B>(i * B, i * B) = a.diag[i];
            if (i > 0)
                d.block<B, B>(i * B, (i - 1) * B) = a.sub[i];
            if (i + 1 < n)
                d.block<B, B>(i * B, (i + 1) * B) = a.super[i];
        }
        return d;
    }

    template <int B>
    std::vector<BlockVector<B>> random_vector(std::mt19937_64& rng, std::size_t n)
    {
        std::normal_distribution<double> g;
        std::vector<BlockVector<B>> x(n);
        for (auto& b : x)
            for (int i = 0; i < B; ++i)
                b(i) = {g(rng), g(rng)};
        return x;
    }

    template <int B>
    double norm(const std::vector<BlockVector<B>>& x)
    {
        double s = 0.0;
        for (const auto& b : x)
            s += b.squaredNorm();
        return std::sqrt(s);
    }
}

TEST_CASE("identity blocks return the right-hand side")
{
    std::mt19937_64 rng(1);
    BandedBlockSystem<4> sys{BlockTridiagonalMatrix<4>(5), random_vector<4>(rng, 5)};
    for (auto& d : sys.matrix.diag)
        d.setIdentity();
    const auto x = block_tridiagonal_solve(sys);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(x[i] == sys.rhs[i]);
}

TEST_CASE("scalar blocks: 2 x = 4")
{
    BandedBlockSystem<1> sys{BlockTridiagonalMatrix<1>(1), {BlockVector<1>(4.0)}};
    sys.matrix.diag[0](0, 0) = 2.0;
    CHECK(block_tridiagonal_solve(sys)[0](0) == std::complex<double>(2.0, 0.0));
}

TEST_CASE("3-row system matches a dense solve")
{
    std::mt19937_64 rng(2);
    const auto a = random_system<4>(rng, 3, 6.0);
    const auto rhs = random_vector<4>(rng, 3);
    const auto x = block_tridiagonal_solve(BandedBlockSystem<4>{a, rhs});
    Eigen::VectorXcd b(12);
    for (int i = 0; i < 3; ++i)
        b.segment<4>(4 * i) = rhs[i];
    const Eigen::VectorXcd ref = dense(a).fullPivLu().solve(b);
    for (int i = 0; i < 3; ++i)
        CHECK((x[i] - ref.segment<4>(4 * i)).norm() < 1e-12 * ref.norm());
}

TEST_CASE("residual bound on random well-conditioned systems")
{
    std::mt19937_64 rng(3);
    for (std::size_t n : {2u, 10u, 200u, 2000u})
    {
        const auto a = random_system<4>(rng, n, 12.0);
        const auto rhs = random_vector<4>(rng, n);
        const auto x = block_tridiagonal_solve(BandedBlockSystem<4>{a, rhs});
        auto ax = a.apply(x);
        for (std::size_t i = 0; i < n; ++i)
            ax[i] -= rhs[i];
        CHECK(norm(ax) <= 1e-12 * norm(rhs));
    }
}

TEST_CASE("singular pivot is reported")
{
    BlockTridiagonalMatrix<4> a(3);
    for (auto& d : a.diag)
        d.setIdentity();
    a.diag[1].setZero();
    CHECK_THROWS_AS(BlockTridiagonalFactor<4>{a}, SingularSystemError);
}

TEST_CASE("implicit step with a zero operator is the identity")
{
    std::mt19937_64 rng(4);
    const auto field = random_vector<4>(rng, 20);
    const auto out = implicit_step<4>(BlockTridiagonalMatrix<4>(20), field, 0.3);
    for (std::size_t i = 0; i < field.size(); ++i)
        CHECK(out[i] == field[i]);
}

TEST_CASE("Crank-Nicolson preserves the norm for Hermitian operators")
{
    // d/dR Phi = i Op Phi with Hermitian Op is unitary; with zero Dirichlet
    // edges the interior block is itself Hermitian.
    std::mt19937_64 rng(5);
    const std::size_t n = 64;
    auto op = random_system<4>(rng, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
    {
        op.diag[i] = 0.5 * (op.diag[i] + op.diag[i].adjoint()).eval();
        if (i + 1 < n)
            op.sub[i + 1] = op.super[i].adjoint();
    }
    auto field = random_vector<4>(rng, n);
    field.front().setZero();
    field.back().setZero();
    const CrankNicolsonStepper<4> stepper(op, 0.05);
    double before = norm(field);
    for (int s = 0; s < 50; ++s)
    {
        stepper.step(field);
        const double after = norm(field);
        CHECK(std::abs(after - before) <= 1e-12 * before);
        before = after;
    }
}

TEST_CASE("complex diffusion of a Gaussian packet follows the closed form")
{
    // d_R u = D d_r^2 u with complex D (Re D > 0). Exact solution from
    // u(0) = exp(-r^2 / (4 s0)): u = sqrt(s0 / s) exp(-r^2 / (4 s)), s = s0 + D R.
    const std::complex<double> diff(0.5, 2.0);
    const double h = 0.01, hR = 0.001, s0 = 0.25;
    const int half = 1500, steps = 100;
    const std::size_t n = 2 * half + 1;
    // d_R u = i Op u with Op = -i D d_r^2.
    BlockTridiagonalMatrix<1> op(n);
    const std::complex<double> c = -std::complex<double>(0.0, 1.0) * diff / (h * h);
    for (std::size_t i = 0; i < n; ++i)
    {
        op.sub[i](0, 0) = c;
        op.super[i](0, 0) = c;
        op.diag[i](0, 0) = -2.0 * c;
    }
    std::vector<BlockVector<1>> u(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double r = (static_cast<double>(i) - half) * h;
        u[i](0) = std::exp(-r * r / (4 * s0));
    }
    const CrankNicolsonStepper<1> stepper(op, hR);
    for (int s = 0; s < steps; ++s)
        stepper.step(u);
    const std::complex<double> sR = s0 + diff * (steps * hR);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        const double r = (static_cast<double>(i) - half) * h;
        const std::complex<double> exact = std::sqrt(s0 / sR) * std::exp(-r * r / (4.0 * sR));
        err = std::max(err, std::abs(u[i](0) - exact));
    }
    CHECK(err < 1e-4);
}

TEST_CASE("order estimate from constructed sequences")
{
    // f(h) = 1 + 3 h^2 at h = 0.1, 0.05, 0.025.
    const auto f = [](double h) { return 1.0 + 3.0 * h * h; };
    const ConvergenceReport r = estimate_order(f(0.1), f(0.05), f(0.025));
    REQUIRE(r.order.has_value());
    CHECK(*r.order == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.extrapolated == doctest::Approx(1.0).epsilon(1e-12));

    const auto g = [](double h) { return 2.0 - h; };
    const ConvergenceReport q = estimate_order(g(0.3), g(0.1), g(1.0 / 30.0), 3.0);
    CHECK(*q.order == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(q.extrapolated == doctest::Approx(2.0).epsilon(1e-12));

    const ConvergenceReport c = estimate_order(0.5, 0.5, 0.5);
    CHECK(c.converged());
    CHECK(c.extrapolated == 0.5);
}
