#include "mlcalc/appell.hpp"

#include <cmath>

#include "mlcalc/linsolve.hpp"

namespace mlcalc {

AppellCoeffs appell_coeffs(const MLParams& params, int N) {
    params.validate();
    if (N < 0) throw InvalidArgument("appell_coeffs needs N >= 0");
    AppellCoeffs c;
    c.beta = params.beta;
    c.b.assign(N + 1, 0.0);
    c.b[0] = 1.0;
    for (int n = 1; n <= N; ++n) {
        double acc = 0.0;
        for (int k = 1; k <= n; ++k)
            acc += c.b[n - k] * gamma_reciprocal(params.beta * k + 1.0);
        c.b[n] = -acc;
    }
    return c;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

AppellSystem::AppellSystem(MLParams params, int dim, int max_degree)
    : params_(params), dim_(dim), max_degree_(max_degree) {
    params_.validate();
    if (dim < 1) throw InvalidArgument("dim must be >= 1");
    if (max_degree < 0) throw InvalidArgument("max_degree must be >= 0");

    coeffs_ = appell_coeffs(params_, max_degree_ + 1);

    tr_powers_.reserve(max_degree_ + 1);
    tr_powers_.push_back(SymTensor::scalar(dim_, 1.0));
    SymTensor tr = trace_tensor(dim_);
    for (int m = 1; m <= max_degree_; ++m)
        tr_powers_.push_back(sym_product(tr_powers_.back(), tr));

    int mb = moment_budget();
    moments_.reserve(mb + 1);
    p_zero_.reserve(mb + 1);
    zeros_.reserve(mb + 2);
    for (int n = 0; n <= mb + 1; ++n) zeros_.emplace_back(dim_, n);
    for (int n = 0; n <= mb; ++n) {
        if (n % 2 == 1) {
            moments_.emplace_back(dim_, n);
            p_zero_.emplace_back(dim_, n);
            continue;
        }
        int m = n / 2;
        double cm = factorial(n) / std::pow(2.0, m) * gamma_reciprocal(params_.beta * m + 1.0);
        moments_.push_back(cm * sym_trace_power(m));
        double pz = coeffs_.b[m] * factorial(n) / std::pow(2.0, m);
        p_zero_.push_back(pz * sym_trace_power(m));
    }
}

const SymTensor& AppellSystem::moment_kernel(int n) const {
    if (n < 0) throw InvalidArgument("moment_kernel degree < 0");
    if (n > moment_budget())
        throw DegreeOverflow("moment kernel degree " + std::to_string(n) +
                             " beyond budget " + std::to_string(moment_budget()));
    return moments_[n];
}

const SymTensor& AppellSystem::p_at_zero(int n) const {
    if (n < 0 || n > moment_budget())
        throw DegreeOverflow("p_at_zero degree out of budget");
    return p_zero_[n];
}

const SymTensor& AppellSystem::sym_trace_power(int m) const {
    if (m < 0 || 2 * m > moment_budget())
        throw DegreeOverflow("trace power out of budget");
    return tr_powers_[m];
}

SymTensor AppellSystem::appell_kernel(const std::vector<Cplx>& omega, int n) const {
    if (static_cast<int>(omega.size()) != dim_)
        throw DimMismatch("appell_kernel omega dim");
    if (n > static_cast<int>(coeffs_.b.size()) - 1 || n > moment_budget())
        throw DegreeOverflow("appell_kernel degree beyond precomputed budget");
    SymTensor out(dim_, n);
    for (int k = 0; 2 * k <= n; ++k) {
        // b_k n! / (2^k (n-2k)!) tau^{(x)k} (x) omega^{(x)(n-2k)}
        double coef = coeffs_.b[k] / std::pow(2.0, k);
        for (int j = n - 2 * k + 1; j <= n; ++j) coef *= j; // falling factorial
        SymTensor term = sym_product(tr_powers_[k], SymTensor::vector_power(omega, n - 2 * k));
        out += coef * term;
    }
    return out;
}

ChaosVector AppellSystem::to_monomial(const ChaosVector& v) const {
    if (v.role() != Role::TestFunction)
        throw BasisMismatch("to_monomial expects a test function");
    if (v.basis() == Basis::Monomial) return v;
    ChaosVector out(v.params(), v.dim(), Role::TestFunction, Basis::Monomial,
                    v.max_degree());
    for (int n = 0; n <= v.max_degree(); ++n) {
        const SymTensor& phi = v.kernel(n);
        if (phi.is_zero()) continue;
        for (int k = n; k >= 0; k -= 2) {
            // <P_n(x), phi> = sum_k C(n,k) < x^{(x)k}, P_{n-k}(0) (x)hat_{n-k} phi >
            const SymTensor& pz = p_at_zero(n - k);
            if (pz.is_zero()) continue;
            out.kernel(k) += binomial(n, k) * contract(phi, pz);
        }
    }
    return out;
}

ChaosVector AppellSystem::to_appell(const ChaosVector& v) const {
    if (v.role() != Role::TestFunction)
        throw BasisMismatch("to_appell expects a test function");
    if (v.basis() == Basis::AppellP) return v;
    ChaosVector out(v.params(), v.dim(), Role::TestFunction, Basis::AppellP,
                    v.max_degree());
    for (int n = 0; n <= v.max_degree(); ++n) {
        const SymTensor& mono = v.kernel(n);
        if (mono.is_zero()) continue;
        for (int k = n; k >= 0; k -= 2) {
            // x^{(x)n} = sum_k C(n,k) P_k(x) (x)hat M_{n-k}
            const SymTensor& mom = moment_kernel(n - k);
            if (mom.is_zero()) continue;
            out.kernel(k) += binomial(n, k) * contract(mono, mom);
        }
    }
    return out;
}

Cplx AppellSystem::dual_pair(const ChaosVector& Phi, const ChaosVector& phi) const {
    if (Phi.dim() != phi.dim() || Phi.dim() != dim_)
        throw DimMismatch("dual_pair dims differ");
    if (Phi.params().beta != phi.params().beta || Phi.params().beta != params_.beta)
        throw BetaMismatch("dual_pair beta differs");
    if (Phi.role() != Role::Distribution)
        throw BasisMismatch("dual_pair expects a distribution on the left");
    const ChaosVector* test = &phi;
    ChaosVector converted;
    if (phi.basis() == Basis::Monomial) {
        converted = to_appell(phi);
        test = &converted;
    }
    Cplx acc = 0.0;
    int top = std::min(Phi.max_degree(), test->max_degree());
    for (int n = 0; n <= top; ++n)
        acc += factorial(n) * pairing(Phi.kernel(n), test->kernel(n));
    return acc;
}

Cplx AppellSystem::l2_pairing(const ChaosVector& f, const ChaosVector& g) const {
    if (f.dim() != g.dim() || f.dim() != dim_) throw DimMismatch("l2_pairing dims");
    if (f.params().beta != g.params().beta || f.params().beta != params_.beta)
        throw BetaMismatch("l2_pairing beta differs");
    if (f.role() != Role::TestFunction || g.role() != Role::TestFunction)
        throw BasisMismatch("l2_pairing expects two test functions");
    ChaosVector a = to_monomial(f);
    ChaosVector b = to_monomial(g);
    if (a.top_degree() + b.top_degree() > moment_budget())
        throw DegreeOverflow("combined degree beyond moment budget");
    Cplx acc = 0.0;
    for (int m = 0; m <= a.max_degree(); ++m) {
        if (a.kernel(m).is_zero()) continue;
        for (int n = 0; n <= b.max_degree(); ++n) {
            if (b.kernel(n).is_zero()) continue;
            if ((m + n) % 2 == 1) continue; // odd moments vanish
            // E[ <w^m, a><w^n, conj b> ] = < M_{m+n}, a (x)hat conj(b) >
            acc += pairing(contract(moment_kernel(m + n), a.kernel(m)),
                           b.kernel(n).conj());
        }
    }
    return acc;
}

Cplx AppellSystem::l2_pairing_bilinear(const ChaosVector& f, const ChaosVector& g) const {
    ChaosVector gc = g;
    for (int n = 0; n <= gc.max_degree(); ++n) gc.kernel(n) = gc.kernel(n).conj();
    return l2_pairing(f, gc);
}

ChaosVector AppellSystem::q_embed(const ChaosVector& f, int out_degree) const {
    if (f.role() != Role::TestFunction)
        throw BasisMismatch("q_embed expects a test function");
    ChaosVector a = to_monomial(f);
    int deg = std::max(a.top_degree(), 0);
    if (deg + out_degree > moment_budget())
        throw DegreeOverflow("q_embed needs moment budget deg(f) + out_degree");

    // T_j = sum_m M_{m+j} (x)hat_m a_m, then
    // Phi^{(k)} = (1/k!) sum_j C(k,j) T_j (x)hat P_{k-j}(0).
    std::vector<SymTensor> T;
    T.reserve(out_degree + 1);
    for (int j = 0; j <= out_degree; ++j) {
        SymTensor t(dim_, j);
        for (int m = 0; m <= deg; ++m) {
            if (a.kernel(m).is_zero() || (m + j) % 2 == 1) continue;
            t += contract(moment_kernel(m + j), a.kernel(m));
        }
        T.push_back(std::move(t));
    }
    ChaosVector out(params_, dim_, Role::Distribution, Basis::AppellP, out_degree);
    for (int k = 0; k <= out_degree; ++k) {
        SymTensor acc(dim_, k);
        for (int j = 0; j <= k; ++j) {
            const SymTensor& pz = p_at_zero(k - j);
            if (pz.is_zero() || T[j].is_zero()) continue;
            acc += binomial(k, j) * sym_product(T[j], pz);
        }
        out.kernel(k) = (1.0 / factorial(k)) * acc;
    }
    return out;
}

ChaosVector AppellSystem::q_realize(const ChaosVector& Phi, int out_degree) const {
    if (Phi.role() != Role::Distribution)
        throw BasisMismatch("q_realize expects a distribution");
    if (2 * out_degree > moment_budget())
        throw DegreeOverflow("q_realize needs moment budget 2*out_degree");

    // Basis of monomial kernels up to out_degree; q_embed is linear, so one
    // embed per basis element yields the Gram system.
    struct Slot { int degree; MultiIndex idx; };
    std::vector<Slot> slots;
    for (int n = 0; n <= out_degree; ++n)
        for (const auto& m : all_multisets(dim_, n)) slots.push_back({n, m});
    int B = static_cast<int>(slots.size());

    std::vector<Cplx> A(static_cast<std::size_t>(B) * B, Cplx(0.0));
    std::vector<Cplx> rhs(B, Cplx(0.0));
    for (int col = 0; col < B; ++col) {
        ChaosVector e(params_, dim_, Role::TestFunction, Basis::Monomial, out_degree);
        e.kernel(slots[col].degree).set(slots[col].idx, 1.0);
        ChaosVector em = q_embed(e, out_degree);
        for (int row = 0; row < B; ++row)
            A[static_cast<std::size_t>(row) * B + col] =
                em.kernel(slots[row].degree).at(slots[row].idx);
    }
    for (int row = 0; row < B; ++row) {
        if (slots[row].degree <= Phi.max_degree())
            rhs[row] = Phi.kernel(slots[row].degree).at(slots[row].idx);
    }
    lu_solve(A, rhs, B);

    ChaosVector u(params_, dim_, Role::TestFunction, Basis::Monomial, out_degree);
    for (int i = 0; i < B; ++i)
        if (rhs[i] != Cplx(0.0)) u.kernel(slots[i].degree).set(slots[i].idx, rhs[i]);
    return u;
}

Cplx AppellSystem::evaluate(const ChaosVector& v, const std::vector<Cplx>& omega) const {
    if (v.role() != Role::TestFunction)
        throw BasisMismatch("evaluate expects a test function");
    ChaosVector mono = to_monomial(v);
    Cplx acc = 0.0;
    for (int n = 0; n <= mono.max_degree(); ++n) {
        const SymTensor& kn = mono.kernel(n);
        for (const auto& [idx, c] : kn.coeffs()) {
            Cplx w = 1.0;
            for (int k : idx) w *= omega[k];
            acc += multiset_multiplicity(idx) * c * w;
        }
    }
    return acc;
}

} // namespace mlcalc
