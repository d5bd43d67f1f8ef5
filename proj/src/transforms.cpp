#include "mlcalc/transforms.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

namespace mlcalc {

namespace {

// One radius per beta; computed on first use.
double compute_radius(const MLParams& params) {
    const double x_max = 40.0;
    MLParams p = params;
    p.series_tol = 1e-12;
    double prev = 1.0;
    for (double x = 0.5; x <= x_max; x += 0.5) {
        double v;
        try {
            v = mittag_leffler(p, Cplx(-x, 0.0)).real();
        } catch (const NonConvergent&) {
            return 0.8 * (x - 0.5);
        }
        if (v <= 0.0 && prev > 0.0) return 0.8 * x; // first sign change
        prev = v;
    }
    return 0.8 * x_max;
}

} // namespace

double positivity_radius(const MLParams& params) {
    static std::mutex mu;
    static std::unordered_map<double, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(params.beta);
    if (it != cache.end()) return it->second;
    double r = compute_radius(params);
    cache[params.beta] = r;
    return r;
}

Cplx bilinear_self(const std::vector<Cplx>& xi) { return bilinear(xi, xi); }

Cplx bilinear(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
    if (a.size() != b.size()) throw DimMismatch("bilinear pairing dims differ");
    Cplx acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
    return acc;
}

namespace {

Cplx checked_normalizer(const MLParams& params, const std::vector<Cplx>& xi) {
    Cplx half = 0.5 * bilinear_self(xi);
    if (std::abs(half) >= positivity_radius(params))
        throw OutsideDomain("|<xi,xi>|/2 outside the positivity radius of E_beta");
    Cplx e = mittag_leffler(params, half);
    if (half.imag() == 0.0) {
        if (e.real() <= 0.0) throw OutsideDomain("E_beta(<xi,xi>/2) <= 0");
    } else if (std::abs(e) < 1e-8) {
        throw OutsideDomain("E_beta(<xi,xi>/2) too close to zero");
    }
    return e;
}

} // namespace

void require_exp_domain(const MLParams& params, const std::vector<Cplx>& xi) {
    (void)checked_normalizer(params, xi);
}

ExpVector exp_vector(const AppellSystem& sys, const std::vector<Cplx>& xi, int N) {
    if (static_cast<int>(xi.size()) != sys.dim())
        throw DimMismatch("exp_vector xi dim");
    if (N > sys.max_degree())
        throw TruncationOverflow("exp_vector degree beyond system budget");
    require_exp_domain(sys.params(), xi);

    ExpVector ev;
    ev.xi = xi;
    ev.trunc_degree = N;
    ev.body = ChaosVector(sys.params(), sys.dim(), Role::TestFunction,
                          Basis::AppellP, N);
    double fact = 1.0;
    for (int n = 0; n <= N; ++n) {
        if (n > 0) fact *= n;
        ev.body.kernel(n) = (1.0 / fact) * SymTensor::vector_power(xi, n);
    }
    double norm = 0.0;
    for (const auto& c : xi) norm += std::norm(c);
    ev.tail_coeff = std::sqrt(norm);
    return ev;
}

double exp_tail_bound(double xi_norm, double omega_norm, int N) {
    double x = xi_norm * omega_norm;
    // sum_{n>N} x^n/n!
    double term = 1.0;
    for (int n = 1; n <= N + 1; ++n) term *= x / n;
    double acc = 0.0;
    int n = N + 1;
    while (term > 1e-300) {
        acc += term;
        ++n;
        term *= x / n;
        if (n > N + 2000) break;
    }
    return acc;
}

Cplx s_transform(const AppellSystem& sys, const ChaosVector& Phi,
                 const std::vector<Cplx>& xi) {
    if (Phi.role() != Role::Distribution)
        throw BasisMismatch("s_transform expects a distribution");
    if (static_cast<int>(xi.size()) != Phi.dim()) throw DimMismatch("s_transform dims");
    require_exp_domain(sys.params(), xi);
    Cplx acc = 0.0;
    for (int n = 0; n <= Phi.max_degree(); ++n) {
        const SymTensor& kn = Phi.kernel(n);
        if (kn.is_zero()) continue;
        acc += pairing(kn, SymTensor::vector_power(xi, n));
    }
    return acc;
}

Cplx t_transform(const AppellSystem& sys, const ChaosVector& Phi,
                 const std::vector<Cplx>& phi) {
    std::vector<Cplx> iphi(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) iphi[k] = Cplx(0.0, 1.0) * phi[k];
    Cplx pref = mittag_leffler(sys.params(), -0.5 * bilinear_self(phi));
    return pref * s_transform(sys, Phi, iphi);
}

Cplx exp_pairing(const MLParams& params, const std::vector<Cplx>& xi,
                 const std::vector<Cplx>& eta) {
    if (xi.size() != eta.size()) throw DimMismatch("exp_pairing dims differ");
    std::vector<Cplx> sum(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) sum[k] = xi[k] + eta[k];
    Cplx num_arg = 0.5 * bilinear_self(sum);
    if (std::abs(num_arg) >= positivity_radius(params))
        throw OutsideDomain("xi + eta outside the exponential domain");
    Cplx e_num = mittag_leffler(params, num_arg);
    Cplx e_xi = checked_normalizer(params, xi);
    Cplx e_eta = checked_normalizer(params, eta);
    return e_num / (e_xi * e_eta);
}

} // namespace mlcalc
