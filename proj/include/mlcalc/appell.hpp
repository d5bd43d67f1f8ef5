#ifndef MLCALC_APPELL_HPP
#define MLCALC_APPELL_HPP

#include <vector>

#include "mlcalc/chaos_vector.hpp"
#include "mlcalc/special_functions.hpp"

namespace mlcalc {

/// Coefficients of 1/E_beta(z) = sum b_n z^n.
struct AppellCoeffs {
    double beta = 0.5;
    std::vector<double> b; ///< b[0] = 1, b_n = -sum_{k=1..n} b_{n-k}/Gamma(beta k + 1)
};

/// b_0..b_N by the recursion; for beta = 1 this reproduces (-1)^n/n!.
AppellCoeffs appell_coeffs(const MLParams& params, int N);

double binomial(int n, int k);
double factorial(int n);

/// Precomputed Appell machinery for one (beta, dim) at a fixed truncation
/// degree. Moment kernels are built to 2*max_degree so L2 pairings of two
/// full-degree vectors stay inside the budget; all tables are immutable after
/// construction.
class AppellSystem {
public:
    AppellSystem(MLParams params, int dim, int max_degree);

    const MLParams& params() const { return params_; }
    int dim() const { return dim_; }
    int max_degree() const { return max_degree_; }
    int moment_budget() const { return 2 * max_degree_; }

    const AppellCoeffs& coeffs() const { return coeffs_; }

    /// M_n: zero for odd n, (2m)!/(2^m Gamma(beta m + 1)) sym(Tr^{(x)m}) for n = 2m.
    const SymTensor& moment_kernel(int n) const;

    /// P_n(0): zero for odd n, b_m (2m)!/2^m sym(Tr^{(x)m}) for n = 2m.
    const SymTensor& p_at_zero(int n) const;

    /// sym(Tr^{(x)m}), degree 2m.
    const SymTensor& sym_trace_power(int m) const;

    /// P_n(omega) from the explicit kernel formula.
    SymTensor appell_kernel(const std::vector<Cplx>& omega, int n) const;

    /// Basis changes between the P-expansion and the monomial expansion of a
    /// test function; exact inverses of one another.
    ChaosVector to_monomial(const ChaosVector& v) const;
    ChaosVector to_appell(const ChaosVector& v) const;

    /// << Phi, phi >> = sum_n n! < Phi^{(n)}, phi^{(n)} >, bilinear.
    Cplx dual_pair(const ChaosVector& Phi, const ChaosVector& phi) const;

    /// L2(mu_beta) inner product of two (truncated) test functions, the second
    /// argument conjugated. Exact through the moment kernels.
    Cplx l2_pairing(const ChaosVector& f, const ChaosVector& g) const;

    /// Bilinear extension <<f, g>> = l2_pairing(f, conj g).
    Cplx l2_pairing_bilinear(const ChaosVector& f, const ChaosVector& g) const;

    /// Q-system representation of a test function, truncated at out_degree:
    /// dual_pair(q_embed(f), psi) = <<f, psi>> exactly for deg(psi) <= out_degree.
    ChaosVector q_embed(const ChaosVector& f, int out_degree) const;

    /// Truncated L2 representative of a distribution: the test function u
    /// (monomial basis) with q_embed(u) = Phi through degree out_degree.
    ChaosVector q_realize(const ChaosVector& Phi, int out_degree) const;

    /// Pointwise evaluation of a test function.
    Cplx evaluate(const ChaosVector& v, const std::vector<Cplx>& omega) const;

private:
    MLParams params_;
    int dim_;
    int max_degree_;
    AppellCoeffs coeffs_;
    std::vector<SymTensor> tr_powers_;  // sym(Tr^m), m = 0..max_degree
    std::vector<SymTensor> moments_;    // M_n, n = 0..2*max_degree
    std::vector<SymTensor> p_zero_;     // P_n(0), n = 0..2*max_degree
    std::vector<SymTensor> zeros_;      // zero tensor per degree, for returns
};

} // namespace mlcalc

#endif
