#pragma once

#include <complex>
#include <random>

#include "rydpol/closure.hpp"
#include "rydpol/model.hpp"

namespace testing
{
    // Random double-tripod parameters: detunings in [-5, 5], Rabi entries with
    // magnitude in [0.5, 3] and uniform phase.
    inline rydpol::SchemeParams random_params(std::mt19937_64& rng)
    {
        std::uniform_real_distribution<double> delta(-5.0, 5.0), mag(0.5, 3.0), phase(0.0, 6.283185307179586);
        rydpol::SchemeParams p;
        p.delta1 = delta(rng);
        p.delta2 = delta(rng);
        for (int i = 0; i < 4; ++i)
            p.rabi(i / 2, i % 2) = std::polar(mag(rng), phase(rng));
        return p;
    }

    inline rydpol::PairField random_field(std::mt19937_64& rng)
    {
        std::normal_distribution<double> n;
        rydpol::PairField f;
        for (int i = 0; i < 4; ++i)
            f(i / 2, i % 2) = {n(rng), n(rng)};
        return f;
    }

    // Direct solve of the steady-state constraint for Phi^ss written entry by
    // entry: sum_m d_m (v_jm (es_ml + ss_ml) + v_lm (se_jm + ss_jm)) - 2 V ss_jl = 0.
    inline rydpol::PairField dense_phi_ss(const rydpol::PairField& es, const rydpol::PairField& se,
                                          const rydpol::SchemeParams& p, double v)
    {
        const std::complex<double> d[2] = {1.0 / std::complex<double>(2 * p.delta1, -1.0),
                                           1.0 / std::complex<double>(2 * p.delta2, -1.0)};
        const Eigen::Matrix2cd vel = p.rabi * p.rabi.adjoint();
        Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
        Eigen::Vector4cd rhs = Eigen::Vector4cd::Zero();
        for (int j = 0; j < 2; ++j)
            for (int l = 0; l < 2; ++l)
            {
                const int row = 2 * j + l;
                m(row, row) -= 2.0 * v;
                for (int mm = 0; mm < 2; ++mm)
                {
                    m(row, 2 * mm + l) += d[mm] * vel(j, mm);
                    m(row, 2 * j + mm) += d[mm] * vel(l, mm);
                    rhs(row) -= d[mm] * (vel(j, mm) * es(mm, l) + vel(l, mm) * se(j, mm));
                }
            }
        const Eigen::Vector4cd x = m.fullPivLu().solve(rhs);
        rydpol::PairField out;
        out << x(0), x(1), x(2), x(3);
        return out;
    }
}
