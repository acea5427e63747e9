#include "doctest.h"

#include <cmath>

#include "rydpol/error.hpp"
#include "rydpol/numerics.hpp"
#include "rydpol/transport.hpp"

using namespace rydpol;

namespace
{
    // d/dz along_z = -along_z / 2 on [0, 1]; value at (z = 1, z' = 0).
    double exponential_end(std::size_t n)
    {
        const TwoPointGrid grid = TwoPointGrid::over(1.0, n);
        const PairField one = PairField::Constant(1.0);
        const TransportEdges edges = TransportEdges::uniform(n, one, one, one);
        double end = 0.0;
        march_transport(
            grid, edges,
            [](std::size_t, std::size_t, const TransportState& s) {
                TransportState r;
                r.along_z = -0.5 * s.along_z;
                return r;
            },
            [&](std::size_t i, std::span<const TransportState> row) {
                if (i == n - 1)
                    end = row[0].along_z(0, 0).real();
            });
        return end;
    }
}

TEST_CASE("grid construction")
{
    const TwoPointGrid g = TwoPointGrid::over(30.0, 301);
    CHECK(g.h == doctest::Approx(0.1));
    CHECK(g.extent() == doctest::Approx(30.0));
    CHECK(g.refined(2).n == 601);
    CHECK(g.refined(2).h == doctest::Approx(0.05));
    CHECK_THROWS_AS(TwoPointGrid::over(30.0, 1), PreconditionError);
    CHECK_THROWS_AS(TwoPointGrid::over(0.0, 10), PreconditionError);
}

TEST_CASE("zero right-hand side propagates the edge data")
{
    const std::size_t n = 7;
    const PairField a = PairField::Constant(cplx(1.0, 2.0));
    const PairField b = PairField::Constant(cplx(-3.0, 0.5));
    const PairField c = PairField::Constant(cplx(0.25, -1.0));
    const TransportEdges edges = TransportEdges::uniform(n, a, b, c);
    std::size_t rows = 0;
    march_transport(
        TwoPointGrid::over(1.0, n), edges, [](std::size_t, std::size_t, const TransportState&) { return TransportState{}; },
        [&](std::size_t, std::span<const TransportState> row) {
            ++rows;
            for (const auto& s : row)
            {
                CHECK(s.along_z == a);
                CHECK(s.along_zp == b);
                CHECK(s.along_diag == c);
            }
        });
    CHECK(rows == n);
}

TEST_CASE("exponential decay reaches e^-1/2 with second-order accuracy")
{
    const double exact = std::exp(-0.5);
    CHECK(std::abs(exponential_end(1001) - exact) < 1e-6);
    CHECK(exponential_end(1001) == doctest::Approx(0.606531).epsilon(1e-6));
    const double c = exponential_end(11), m = exponential_end(21), f = exponential_end(41);
    const ConvergenceReport r = estimate_order(c, m, f);
    REQUIRE(r.order.has_value());
    CHECK(*r.order == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::abs(r.extrapolated - exact) < std::abs(f - exact));
}

TEST_CASE("each field follows its own characteristic")
{
    // along_zp grows along z' only, along_diag along the diagonal only.
    const std::size_t n = 401;
    const TwoPointGrid grid = TwoPointGrid::over(1.0, n);
    const PairField one = PairField::Constant(1.0);
    std::vector<TransportState> last;
    march_transport(
        grid, TransportEdges::uniform(n, one, one, one),
        [](std::size_t, std::size_t, const TransportState& s) {
            TransportState r;
            r.along_zp = s.along_zp;
            r.along_diag = -s.along_diag;
            return r;
        },
        [&](std::size_t, std::span<const TransportState> row) { last.assign(row.begin(), row.end()); });
    // Node (z = 1, z' = 1): along_zp travelled 1 in z', along_diag travelled 1 diagonally.
    CHECK(last.back().along_zp(0, 0).real() == doctest::Approx(std::exp(1.0)).epsilon(1e-5));
    CHECK(last.back().along_diag(1, 1).real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-5));
    CHECK(last.back().along_z(0, 1).real() == 1.0);
}

TEST_CASE("non-finite values abort with the node")
{
    const std::size_t n = 5;
    const PairField one = PairField::Constant(1.0);
    auto rhs = [](std::size_t i, std::size_t k, const TransportState&) {
        TransportState r;
        if (i == 2 && k == 3)
            r.along_z.setConstant(std::nan(""));
        return r;
    };
    try
    {
        march_transport(TwoPointGrid::over(1.0, n), TransportEdges::uniform(n, one, one, one), rhs,
                        [](std::size_t, std::span<const TransportState>) {});
        FAIL("expected NumericalError");
    }
    catch (const NumericalError& e)
    {
        CHECK(std::string(e.what()).find("(2, 3)") != std::string::npos);
    }
}

TEST_CASE("edge length mismatch is rejected")
{
    const PairField one = PairField::Constant(1.0);
    CHECK_THROWS_AS(march_transport(TwoPointGrid::over(1.0, 5), TransportEdges::uniform(4, one, one, one),
                                    [](std::size_t, std::size_t, const TransportState&) { return TransportState{}; },
                                    [](std::size_t, std::span<const TransportState>) {}),
                    PreconditionError);
}
