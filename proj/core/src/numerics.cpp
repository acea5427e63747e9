#include "rydpol/numerics.hpp"

namespace rydpol
{
    template class BlockTridiagonalFactor<4>;
    template class CrankNicolsonStepper<4>;

    ConvergenceReport estimate_order(double coarse, double medium, double fine, double ratio)
    {
        if (!(ratio > 1.0))
            throw PreconditionError("refinement ratio must exceed 1");
        ConvergenceReport rep;
        rep.coarse = coarse;
        rep.medium = medium;
        rep.fine = fine;
        rep.ratio = ratio;
        const double d1 = std::abs(coarse - medium);
        const double d2 = std::abs(medium - fine);
        if (d1 < 1e-14 || d2 < 1e-14)
        {
            rep.extrapolated = fine;
            return rep;
        }
        const double p = std::log(d1 / d2) / std::log(ratio);
        rep.order = p;
        const double gain = std::pow(ratio, p) - 1.0;
        rep.extrapolated = gain > 1e-12 ? fine + (fine - medium) / gain : fine;
        return rep;
    }
}
