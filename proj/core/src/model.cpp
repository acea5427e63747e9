#include "rydpol/model.hpp"

#include <cmath>
#include <limits>

#include "rydpol/error.hpp"

namespace rydpol
{
    namespace
    {
        bool finite_matrix(const Matrix2c& m)
        {
            for (int i = 0; i < 4; ++i)
            {
                const cplx z = m(i / 2, i % 2);
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                    return false;
            }
            return true;
        }
    }

    void SchemeParams::validate() const
    {
        if (!(alpha > 0.0) || !std::isfinite(alpha))
            throw PreconditionError("alpha must be positive and finite");
        if (!(rb > 0.0) || !std::isfinite(rb))
            throw PreconditionError("rb must be positive and finite");
        if (!(amplitude > 0.0) || !std::isfinite(amplitude))
            throw PreconditionError("amplitude must be positive and finite");
        if (!(c_ratio > 0.0) || !std::isfinite(c_ratio))
            throw PreconditionError("c_ratio must be positive and finite");
        if (!std::isfinite(delta1) || !std::isfinite(delta2))
            throw PreconditionError("detunings must be finite");
        if (!finite_matrix(rabi))
            throw PreconditionError("Rabi matrix entries must be finite");
        if (omega_max() <= 0.0)
            throw PreconditionError("Rabi matrix must not vanish");
    }

    bool SchemeParams::is_double_ladder() const
    {
        return rabi(0, 1) == cplx(0.0) && rabi(1, 0) == cplx(0.0) && rabi(0, 0) == rabi(1, 1);
    }

    double SchemeParams::omega_max() const
    {
        return rabi.cwiseAbs().maxCoeff();
    }

    Interaction DerivedContext::potential(double r) const
    {
        if (!interactions)
            return Interaction::finite(0.0);
        return vdw_potential(r, c6);
    }

    cplx complex_detuning(double delta, double gamma)
    {
        return {2.0 * delta, -gamma};
    }

    Matrix2c group_velocity_matrix(const Matrix2c& rabi)
    {
        Matrix2c v = rabi * rabi.adjoint();
        // Exact Hermiticity: the diagonal of Omega Omega^dagger is real and the
        // off-diagonal pair are conjugates.
        v(0, 0) = v(0, 0).real();
        v(1, 1) = v(1, 1).real();
        v(1, 0) = std::conj(v(0, 1));
        return v;
    }

    double blockade_radius(double c6, double omega_max)
    {
        if (!(c6 > 0.0) || !(omega_max > 0.0))
            throw PreconditionError("blockade_radius requires c6 > 0 and omega_max > 0");
        return std::pow(c6 / (omega_max * omega_max), 1.0 / 6.0);
    }

    double c6_from_rb(double rb, double omega_max)
    {
        if (!(rb > 0.0) || !(omega_max > 0.0))
            throw PreconditionError("c6_from_rb requires rb > 0 and omega_max > 0");
        const double rb3 = rb * rb * rb;
        return rb3 * rb3 * omega_max * omega_max;
    }

    double modified_blockade_radius(double rb, double delta)
    {
        if (!(rb > 0.0))
            throw PreconditionError("modified_blockade_radius requires rb > 0");
        const double x = 2.0 * delta;
        return rb * std::pow(x * x + 1.0, 1.0 / 12.0);
    }

    Interaction vdw_potential(double r, double c6)
    {
        if (r == 0.0)
            return Interaction::infinite();
        const double r2 = r * r;
        const double v = c6 / (r2 * r2 * r2);
        if (!std::isfinite(v))
            return Interaction::infinite();
        return Interaction::finite(v);
    }

    DerivedContext make_context(const SchemeParams& params)
    {
        params.validate();
        DerivedContext ctx;
        ctx.dtilde1 = complex_detuning(params.delta1);
        ctx.dtilde2 = complex_detuning(params.delta2);
        ctx.dinv1 = 1.0 / ctx.dtilde1;
        ctx.dinv2 = 1.0 / ctx.dtilde2;
        ctx.v = group_velocity_matrix(params.rabi);
        ctx.vbar = 0.5 * (ctx.v(0, 0).real() + ctx.v(1, 1).real());
        ctx.c6 = c6_from_rb(params.rb, params.omega_max());
        ctx.rb_bar = modified_blockade_radius(params.rb, params.delta1);
        ctx.interactions = params.interactions;
        return ctx;
    }

    Matrix2c rabi_for_velocity_ratio(double ratio, double omega)
    {
        if (!(std::abs(ratio) <= 1.0))
            throw PreconditionError("v12/v11 must lie in [-1, 1] for equal-magnitude Rabi frequencies");
        const double s = std::acos(ratio);
        Matrix2c rabi;
        rabi << cplx(omega, 0.0), std::polar(omega, s),
                std::polar(omega, s), cplx(omega, 0.0);
        return rabi;
    }
}
