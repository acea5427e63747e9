#pragma once

// Physical parameters of the double-tripod / double-ladder Rydberg EIT medium.
//
// Units: the intermediate-state decay rate Gamma and the resonant absorption
// length L_abs are both 1. Detunings and Rabi frequencies are in units of
// Gamma, lengths in units of L_abs, group velocities in L_abs * Gamma, and the
// ratio c/g^2 equals L_abs/Gamma = 1. The medium occupies 0 <= z <= alpha.

#include <complex>

#include <Eigen/Dense>

namespace rydpol
{
    using cplx = std::complex<double>;
    using Matrix2c = Eigen::Matrix2cd;

    // Interaction strength V between two Rydberg excitations. The value at
    // zero separation is represented by an explicit sentinel; callers take the
    // V -> infinity limit of their formulas instead of doing arithmetic on it.
    class Interaction
    {
    public:
        static constexpr Interaction finite(double value) { return Interaction(value, false); }
        static constexpr Interaction infinite() { return Interaction(0.0, true); }

        constexpr bool is_infinite() const { return m_infinite; }
        constexpr bool is_zero() const { return !m_infinite && m_value == 0.0; }
        // Only meaningful when !is_infinite().
        constexpr double value() const { return m_value; }

    private:
        constexpr Interaction(double value, bool inf) : m_value(value), m_infinite(inf) {}

        double m_value;
        bool m_infinite;
    };

    struct SchemeParams
    {
        double delta1 = 0.0;
        double delta2 = 0.0;
        // Omega_{jl} couples e_j to s_l (0-based indices in code).
        Matrix2c rabi = Matrix2c::Identity();
        double alpha = 30.0;
        double rb = 0.4;
        double amplitude = 1.0;
        double c_ratio = 1e4;
        // false switches the van der Waals interaction off entirely (V == 0).
        bool interactions = true;

        // Throws PreconditionError on a violated invariant.
        void validate() const;
        bool is_double_ladder() const;
        double omega_max() const;
    };

    struct DerivedContext
    {
        cplx dtilde1;
        cplx dtilde2;
        // 1/dtilde_j, the combination that enters every equation.
        cplx dinv1;
        cplx dinv2;
        Matrix2c v;
        double vbar = 0.0;
        double c6 = 0.0;
        double rb_bar = 0.0;
        bool interactions = true;

        cplx dinv(int j) const { return j == 0 ? dinv1 : dinv2; }
        Interaction potential(double r) const;
    };

    cplx complex_detuning(double delta, double gamma = 1.0);

    // v = Omega Omega^dagger (c/g^2 = 1).
    Matrix2c group_velocity_matrix(const Matrix2c& rabi);

    // Rydberg blockade radius from V(r_b) = Omega^2 / Gamma.
    double blockade_radius(double c6, double omega_max);
    double c6_from_rb(double rb, double omega_max);

    // Blockade radius widened by a one-photon detuning, rb ((2 delta)^2 + 1)^(1/12).
    double modified_blockade_radius(double rb, double delta);

    // C6 / r^6, with the r = 0 singularity returned as Interaction::infinite().
    Interaction vdw_potential(double r, double c6);

    DerivedContext make_context(const SchemeParams& params);

    // Omega_{jl} = omega e^{i S_jl} with S_11 = S_22 = 0 and cos S_12 = cos S_21 = ratio,
    // which gives v = 2 omega^2 [[1, ratio], [ratio, 1]].
    Matrix2c rabi_for_velocity_ratio(double ratio, double omega = 1.0);
}
