#ifndef MLCALC_OPERATORS_HPP
#define MLCALC_OPERATORS_HPP

#include <optional>
#include <string>
#include <vector>

#include "mlcalc/transforms.hpp"

namespace mlcalc {

/// Kernel of an integral kernel operator Xi_{l,m}: coefficients indexed by a
/// (creation, annihilation) pair of sorted multi-indices; symmetric within
/// each group separately. A fully symmetric SymTensor or a plain matrix
/// (l = m = 1) both embed into this form.
struct KernelLM {
    int l = 0;
    int m = 0;
    int dim = 1;
    std::map<std::pair<MultiIndex, MultiIndex>, Cplx> entries;

    static KernelLM from_sym_tensor(int l, int m, const SymTensor& kappa);
    /// l = m = 1 with entries fixed so the operator's symbol is <xi, A eta>.
    static KernelLM from_matrix(const std::vector<std::vector<Cplx>>& A);

    /// <kappa, eta> over full index tuples (multiplicity-weighted).
    Cplx pair_with(const KernelLM& eta) const;
};

enum class OpKind {
    Identity,
    DiffConst,
    Gateaux,
    Creation,
    Annihilation,
    Translate,
    Scale,
    IntegralKernel,
    Composition,
};

/// Immutable operator description; apply() realizes it on truncated chaos
/// vectors. Compositions apply right factor first.
class OperatorRep {
public:
    static OperatorRep identity(int dim);
    static OperatorRep diff_const(SymTensor kernel);
    static OperatorRep gateaux(std::vector<Cplx> y);
    static OperatorRep creation(int k, int dim);
    static OperatorRep annihilation(int k, int dim);
    static OperatorRep translate(std::vector<Cplx> y);
    static OperatorRep scale(double c, int dim);
    static OperatorRep integral_kernel(KernelLM kappa);
    static OperatorRep composition(std::vector<OperatorRep> ops);

    OpKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::vector<Cplx>& direction() const { return y_; }
    double scale_factor() const { return c_; }
    int basis_index() const { return k_; }
    const SymTensor& diff_kernel() const { return diff_kernel_; }
    const KernelLM& kernel_lm() const { return kappa_; }
    const std::vector<OperatorRep>& parts() const { return parts_; }

    ChaosVector apply(const AppellSystem& sys, const ChaosVector& v) const;

    std::string kind_name() const;

private:
    OpKind kind_ = OpKind::Identity;
    int dim_ = 1;
    std::vector<Cplx> y_;
    double c_ = 1.0;
    int k_ = 0;
    SymTensor diff_kernel_;
    KernelLM kappa_;
    std::vector<OperatorRep> parts_;
};

/// D(Phi^{(n)}): kernel map out^{(m-n)} += m!/(m-n)! * (Phi (x)hat_n phi^{(m)}).
/// The same map realizes the operator on both the P and the monomial
/// expansion. Role and basis are preserved.
ChaosVector diff_const_apply(const SymTensor& kernel, const ChaosVector& phi);

/// Gateaux derivative D_y = D(y).
ChaosVector gateaux_apply(const std::vector<Cplx>& y, const ChaosVector& phi);

/// Annihilation in the k-th coordinate direction.
ChaosVector annihilation_apply(const AppellSystem& sys, int k, const ChaosVector& v);

/// Creation (adjoint of annihilation under the dual pairing): on Q-kernels
/// Q_n(G) -> Q_{n+1}(G (x)hat e_k). Test-function inputs are first embedded in
/// the Q system.
ChaosVector creation_apply(const AppellSystem& sys, int k, const ChaosVector& v);

/// tau_y: output kernel[k] = sum_n C(n+k,k) (y^{(x)n} (x)hat_n phi^{(n+k)});
/// evaluates to phi(omega + y) on polynomials.
ChaosVector translate_apply(const std::vector<Cplx>& y, const ChaosVector& phi);

/// exp(D_y) truncated at order K; equals translate once K >= deg(phi).
ChaosVector exp_gateaux_apply(const std::vector<Cplx>& y, const ChaosVector& phi, int K);

/// sigma_c on monomial expansions: kernel[m] *= c^m.
ChaosVector scale_apply(double c, const ChaosVector& phi);

/// Xi_{l,m}(kappa) phi as a distribution; the defining bilinear identity
/// <<Xi phi, psi>> = <kappa, eta_{phi,psi}> holds against eta_form.
ChaosVector integral_kernel_apply(const AppellSystem& sys, const KernelLM& kappa,
                                  const ChaosVector& phi);

/// eta_{phi,psi}[k,l] = << D_l phi, D_k psi >> (bilinear L2 pairing of the
/// annihilated pieces; this is << psi, creation_k annih_l phi >> unwound).
KernelLM eta_form(const AppellSystem& sys, int l, int m, const ChaosVector& phi,
                  const ChaosVector& psi);

/// Operator symbol <<Xi e(.;xi), e(.;eta)>> on the truncation.
/// Route (a): apply and pair. Route (b): S-transform of the Q-side output.
Cplx symbol(const AppellSystem& sys, const OperatorRep& op,
            const std::vector<Cplx>& xi, const std::vector<Cplx>& eta, int N);
Cplx symbol_via_s(const AppellSystem& sys, const OperatorRep& op,
                  const std::vector<Cplx>& xi, const std::vector<Cplx>& eta, int N);

/// Exact symbol where one is known: Identity, Gateaux, Translate, Xi_{1,1}.
std::optional<Cplx> symbol_closed_form(const MLParams& params, const OperatorRep& op,
                                       const std::vector<Cplx>& xi,
                                       const std::vector<Cplx>& eta);

/// Mehler evolution on an imaginary exponential:
/// P_t e^{i<y,xi>} = e^{i e^{-t} <y,xi>} E_beta(-(1-e^{-2t}) <xi,xi>/2).
Cplx mehler_exp(const MLParams& params, double t, const std::vector<double>& y,
                const std::vector<double>& xi);

/// | E(-(1-e^{-2s})q/2) E(-(1-e^{-2t}) e^{-2s} q/2) - E(-(1-e^{-2(t+s)})q/2) |,
/// q = <xi,xi>. Zero exactly when beta = 1.
double mehler_semigroup_defect(const MLParams& params, double t, double s,
                               const std::vector<double>& xi);

struct BoundCase {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct BoundReport {
    std::string kind;
    int p = 0;
    int q = 0;
    std::vector<BoundCase> cases;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
};

/// Ratio tables for the three norm bounds, computed with the sign-corrected
/// constants (2^{-2q} and 2qe log 2); reported, never asserted.
BoundReport bound_report_translation(const AppellSystem& sys, int p, int q,
                                     int count, unsigned long long seed);
BoundReport bound_report_gateaux(const AppellSystem& sys, int p, int q,
                                 int count, unsigned long long seed);
BoundReport bound_report_integral_kernel(const AppellSystem& sys, int p, int q,
                                         int count, unsigned long long seed);

} // namespace mlcalc

#endif
