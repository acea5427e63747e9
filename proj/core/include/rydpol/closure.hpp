#pragma once

// Algebraic elimination of the double-Rydberg amplitude Phi^ss.
//
// The steady-state constraint for Phi^ss reads, in matrix form with
// B = v diag(1/dtilde),
//
//     B (Phi^Es + Phi^ss) + (Phi^sE + Phi^ss) B^T - 2 V Phi^ss = 0 .
//
// It is split as Phi^ss = X + Y - Phi^Es+, where X carries the antisymmetric
// part Phi^Es- and has a closed form, and Y solves the 4x4 system
// L0(Y) - 2 V Y = -2 V Phi^Es+ with L0(Y) = B Y + Y B^T. The coefficients A
// of Y = -[2V / (D - 2V)] A Phi^Es+ (D = tr B) reduce to the identity in the
// blockade limit V -> infinity.

#include <Eigen/Dense>

#include "rydpol/model.hpp"

namespace rydpol
{
    // Two-photon amplitude indexed by probe pair (j, l), stored as a 2x2
    // matrix with entry (j, l).
    using PairField = Eigen::Matrix2cd;
    // Linear map on pair fields, acting on the flattened index p = 2 j + l.
    using PairOperator = Eigen::Matrix4cd;
    using PairVector = Eigen::Vector4cd;

    PairVector flatten(const PairField& f);
    PairField unflatten(const PairVector& p);

    struct SymAntisym
    {
        PairField plus;
        PairField minus;
    };

    SymAntisym split_sym_antisym(const PairField& es, const PairField& se);

    // B = v diag(1/dtilde_1, 1/dtilde_2).
    Matrix2c closure_b_matrix(const DerivedContext& ctx);

    // L0 as a 4x4 matrix: B (x) I + I (x) B in the flattened basis.
    PairOperator pair_operator(const DerivedContext& ctx);

    // D = 1/dtilde_1 v11 + 1/dtilde_2 v22.
    cplx closure_trace(const DerivedContext& ctx);

    PairField compute_X(const PairField& minus, const DerivedContext& ctx, Interaction vr);

    struct ClosureCoefficients
    {
        PairOperator a;
        Interaction vr = Interaction::finite(0.0);
    };

    // Throws SingularSystemError when L0 - 2V has condition number above 1e12.
    ClosureCoefficients compute_A(const DerivedContext& ctx, Interaction vr);

    // Precomputed linear map (Phi^Es, Phi^sE) -> Phi^ss for one interaction value.
    // Solvers build one per grid radius and reuse it.
    class ClosureKernel
    {
    public:
        ClosureKernel(const DerivedContext& ctx, Interaction vr);

        PairField apply(const PairField& es, const PairField& se) const;
        // A is left zero at V = 0, where it does not enter.
        const ClosureCoefficients& coefficients() const { return m_coeffs; }

    private:
        Matrix2c m_b;
        // X = m_x_scale * N(Phi^Es-)
        cplx m_x_scale;
        // Y - Phi^Es+ = m_plus_map * Phi^Es+
        PairOperator m_plus_map;
        ClosureCoefficients m_coeffs;
    };

    PairField solve_phi_ss(const PairField& es, const PairField& se,
                           const DerivedContext& ctx, Interaction vr);

    // Residual of the steady-state constraint for a candidate Phi^ss.
    PairField phi_ss_residual(const PairField& es, const PairField& se, const PairField& ss,
                              const DerivedContext& ctx, Interaction vr);
}
