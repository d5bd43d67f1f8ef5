#ifndef MLCALC_TRANSFORMS_HPP
#define MLCALC_TRANSFORMS_HPP

#include "mlcalc/appell.hpp"

namespace mlcalc {

/// Truncated mu_beta-exponential e(.; xi): kernels xi^{(x)n}/n!.
/// Evaluating the body at w approaches e^{<w,xi>}/E_beta(<xi,xi>/2).
struct ExpVector {
    std::vector<Cplx> xi;
    int trunc_degree = 0;
    ChaosVector body;
    double tail_coeff = 0.0; ///< |xi|; tail bound at w is sum_{n>N} (|xi||w|)^n/n!
};

/// Positivity radius of E_beta on the real axis, scaled by 0.8. E_beta(-x) is
/// strictly positive for 0 < beta <= 1, so the root search runs out of the
/// validated interval and the scaled endpoint is returned.
double positivity_radius(const MLParams& params);

/// Bilinear <xi,xi> (no conjugation), the quantity entering every E_beta argument.
Cplx bilinear_self(const std::vector<Cplx>& xi);
Cplx bilinear(const std::vector<Cplx>& a, const std::vector<Cplx>& b);

/// Throws OutsideDomain unless |<xi,xi>|/2 is inside the positivity radius and
/// the computed normalizer E_beta(<xi,xi>/2) is usable.
void require_exp_domain(const MLParams& params, const std::vector<Cplx>& xi);

ExpVector exp_vector(const AppellSystem& sys, const std::vector<Cplx>& xi, int N);

/// Tail bound sum_{n>N} x^n/n! at x = |xi| |omega|.
double exp_tail_bound(double xi_norm, double omega_norm, int N);

/// S transform of a distribution: sum_n < Phi^{(n)}, xi^{(x)n} >.
Cplx s_transform(const AppellSystem& sys, const ChaosVector& Phi,
                 const std::vector<Cplx>& xi);

/// T transform: E_beta(-<phi,phi>/2) * S(Phi)(i phi).
Cplx t_transform(const AppellSystem& sys, const ChaosVector& Phi,
                 const std::vector<Cplx>& phi);

/// Closed form of the exponential pairing
/// Ihat(xi,eta) = E_beta(<xi+eta,xi+eta>/2) / (E_beta(<xi,xi>/2) E_beta(<eta,eta>/2)).
Cplx exp_pairing(const MLParams& params, const std::vector<Cplx>& xi,
                 const std::vector<Cplx>& eta);

} // namespace mlcalc

#endif
