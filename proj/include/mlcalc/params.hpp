#ifndef MLCALC_PARAMS_HPP
#define MLCALC_PARAMS_HPP

#include "mlcalc/errors.hpp"

namespace mlcalc {

/// Order and accuracy knobs shared by every measure-dependent formula.
///
/// beta is the Mittag-Leffler order; beta = 1 is the Gaussian case and
/// 0 < beta < 1 the grey-noise regime.
struct MLParams {
    double beta = 0.5;
    double series_tol = 1e-14; ///< absolute truncation tolerance for series
    int max_terms = 512;       ///< hard cap on summed terms
    int quad_points = 2000;    ///< node budget for Laplace-type quadratures

    void validate() const {
        if (!(beta > 0.0) || !(beta <= 1.0))
            throw BetaOutOfRange("beta must lie in (0,1], got " + std::to_string(beta));
        if (!(series_tol > 0.0))
            throw InvalidArgument("series_tol must be positive");
        if (max_terms < 8)
            throw InvalidArgument("max_terms must be >= 8");
        if (quad_points < 16)
            throw InvalidArgument("quad_points must be >= 16");
    }
};

} // namespace mlcalc

#endif
