#include "rydpol/closure.hpp"

#include <cmath>
#include <limits>

#include "rydpol/error.hpp"

namespace rydpol
{
    namespace
    {
        constexpr double max_condition = 1e12;

        // N_jl = sum_m d_m (v_lm M_jm - v_jm M_ml) = M B^T - B M.
        PairField antisym_numerator(const Matrix2c& b, const PairField& minus)
        {
            return minus * b.transpose() - b * minus;
        }

        double condition_number(const PairOperator& m)
        {
            Eigen::JacobiSVD<PairOperator> svd(m);
            const auto& s = svd.singularValues();
            if (s(3) == 0.0)
                return std::numeric_limits<double>::infinity();
            return s(0) / s(3);
        }
    }

    PairVector flatten(const PairField& f)
    {
        return PairVector(f(0, 0), f(0, 1), f(1, 0), f(1, 1));
    }

    PairField unflatten(const PairVector& p)
    {
        PairField f;
        f << p(0), p(1), p(2), p(3);
        return f;
    }

    SymAntisym split_sym_antisym(const PairField& es, const PairField& se)
    {
        return {0.5 * (es + se), 0.5 * (es - se)};
    }

    Matrix2c closure_b_matrix(const DerivedContext& ctx)
    {
        Matrix2c b = ctx.v;
        b.col(0) *= ctx.dinv1;
        b.col(1) *= ctx.dinv2;
        return b;
    }

    PairOperator pair_operator(const DerivedContext& ctx)
    {
        const Matrix2c b = closure_b_matrix(ctx);
        const Matrix2c id = Matrix2c::Identity();
        PairOperator l0;
        // Row-major flattening p = 2 j + l: (B Y) -> B (x) I, (Y B^T) -> I (x) B.
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
                for (int m = 0; m < 2; ++m)
                    for (int n = 0; n < 2; ++n)
                        l0(2 * j + l, 2 * m + n) = b(j, m) * id(l, n) + id(j, m) * b(l, n);
        return l0;
    }

    cplx closure_trace(const DerivedContext& ctx)
    {
        return ctx.dinv1 * ctx.v(0, 0) + ctx.dinv2 * ctx.v(1, 1);
    }

    PairField compute_X(const PairField& minus, const DerivedContext& ctx, Interaction vr)
    {
        if (vr.is_infinite())
            return PairField::Zero();
        const Matrix2c b = closure_b_matrix(ctx);
        const PairField n = antisym_numerator(b, minus);
        const cplx d = closure_trace(ctx);
        const double v = vr.value();
        // Divide through by V when it dominates to keep the quotient well scaled.
        if (v > 1.0)
            return (n / v) / (d / v - 2.0);
        return n / (d - 2.0 * v);
    }

    ClosureCoefficients compute_A(const DerivedContext& ctx, Interaction vr)
    {
        ClosureCoefficients out;
        out.vr = vr;
        if (vr.is_infinite())
        {
            out.a = PairOperator::Identity();
            return out;
        }
        const PairOperator l0 = pair_operator(ctx);
        const cplx d = closure_trace(ctx);
        const double v = vr.value();
        // A = (D - 2V) (L0 - 2V)^-1, evaluated in the 1/V-scaled form for large V.
        const double scale = v > 1.0 ? v : 1.0;
        const PairOperator m = l0 / scale - (2.0 * v / scale) * PairOperator::Identity();
        if (condition_number(m) > max_condition)
            throw SingularSystemError("closure system L0 - 2V is numerically singular (V = "
                                      + std::to_string(v) + ")");
        out.a = ((d - 2.0 * v) / scale) * m.inverse();
        return out;
    }

    ClosureKernel::ClosureKernel(const DerivedContext& ctx, Interaction vr)
        : m_b(closure_b_matrix(ctx))
    {
        m_coeffs.vr = vr;
        if (vr.is_zero())
        {
            // Y vanishes with V, so A is not needed (L0 alone may be singular).
            m_coeffs.a.setZero();
            m_x_scale = 1.0 / closure_trace(ctx);
            m_plus_map = -PairOperator::Identity();
            return;
        }
        m_coeffs = compute_A(ctx, vr);
        if (vr.is_infinite())
        {
            m_x_scale = 0.0;
            m_plus_map.setZero();
            return;
        }
        const cplx d = closure_trace(ctx);
        const double v = vr.value();
        m_x_scale = v > 1.0 ? (1.0 / v) / (d / v - 2.0) : 1.0 / (d - 2.0 * v);
        // Y - Phi+ = (-2V (D - 2V)^-1 A - I) Phi+ = -L0 (L0 - 2V)^-1 Phi+; the
        // right-hand form avoids cancelling O(1) terms when V is large.
        const double scale = v > 1.0 ? v : 1.0;
        const PairOperator l0 = pair_operator(ctx) / scale;
        m_plus_map = -l0 * (l0 - (2.0 * v / scale) * PairOperator::Identity()).inverse();
    }

    PairField ClosureKernel::apply(const PairField& es, const PairField& se) const
    {
        const SymAntisym parts = split_sym_antisym(es, se);
        PairField result = unflatten(m_plus_map * flatten(parts.plus));
        if (m_x_scale != cplx(0.0))
            result += m_x_scale * antisym_numerator(m_b, parts.minus);
        return result;
    }

    PairField solve_phi_ss(const PairField& es, const PairField& se,
                           const DerivedContext& ctx, Interaction vr)
    {
        return ClosureKernel(ctx, vr).apply(es, se);
    }

    PairField phi_ss_residual(const PairField& es, const PairField& se, const PairField& ss,
                              const DerivedContext& ctx, Interaction vr)
    {
        const Matrix2c b = closure_b_matrix(ctx);
        if (vr.is_infinite())
            return ss;
        return b * (es + ss) + (se + ss) * b.transpose() - 2.0 * vr.value() * ss;
    }
}
