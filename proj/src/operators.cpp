#include "mlcalc/operators.hpp"

#include <cmath>

#include "mlcalc/rng.hpp"

namespace mlcalc {

namespace {

// sym(e_{k1} (x) ... (x) e_{kn}) for a sorted tuple: single entry with value
// 1/mult, so contractions against it slice kernels without extra factors.
SymTensor direction_tensor(int dim, const MultiIndex& idx) {
    SymTensor t(dim, static_cast<int>(idx.size()));
    if (idx.empty())
        t.set({}, 1.0);
    else
        t.set(idx, 1.0 / multiset_multiplicity(idx));
    return t;
}

// D_{l_1} ... D_{l_m} phi: out^{(n)} = (n+m)!/n! * (E_l (x)hat_m phi^{(n+m)}).
ChaosVector multi_annihilate(const ChaosVector& phi, const MultiIndex& idx) {
    int m = static_cast<int>(idx.size());
    int out_deg = std::max(phi.max_degree() - m, 0);
    ChaosVector out(phi.params(), phi.dim(), phi.role(), phi.basis(), out_deg);
    if (phi.max_degree() < m) return out;
    SymTensor e = direction_tensor(phi.dim(), idx);
    for (int n = 0; n + m <= phi.max_degree(); ++n) {
        if (phi.kernel(n + m).is_zero()) continue;
        double factor = 1.0;
        for (int j = n + 1; j <= n + m; ++j) factor *= j;
        out.kernel(n) += factor * contract(phi.kernel(n + m), e);
    }
    return out;
}

} // namespace

KernelLM KernelLM::from_sym_tensor(int l, int m, const SymTensor& kappa) {
    if (kappa.degree() != l + m)
        throw DegreeMismatch("kappa degree must equal l + m");
    KernelLM k;
    k.l = l;
    k.m = m;
    k.dim = kappa.dim();
    for (const auto& ck : all_multisets(kappa.dim(), l)) {
        for (const auto& ak : all_multisets(kappa.dim(), m)) {
            Cplx v = kappa.at(merge_sorted(ck, ak));
            if (v != Cplx(0.0)) k.entries[{ck, ak}] = v;
        }
    }
    return k;
}

KernelLM KernelLM::from_matrix(const std::vector<std::vector<Cplx>>& A) {
    KernelLM k;
    k.l = 1;
    k.m = 1;
    k.dim = static_cast<int>(A.size());
    // creation slot carries the column index so the symbol is <xi, A eta>
    for (int i = 0; i < k.dim; ++i) {
        if (static_cast<int>(A[i].size()) != k.dim)
            throw DimMismatch("matrix kernel must be square");
        for (int j = 0; j < k.dim; ++j)
            if (A[i][j] != Cplx(0.0)) k.entries[{{j}, {i}}] = A[i][j];
    }
    return k;
}

Cplx KernelLM::pair_with(const KernelLM& eta) const {
    if (eta.l != l || eta.m != m) throw DegreeMismatch("kernel pairing shapes differ");
    Cplx acc = 0.0;
    for (const auto& [key, v] : entries) {
        auto it = eta.entries.find(key);
        if (it == eta.entries.end()) continue;
        acc += multiset_multiplicity(key.first) * multiset_multiplicity(key.second) *
               v * it->second;
    }
    return acc;
}

ChaosVector diff_const_apply(const SymTensor& kernel, const ChaosVector& phi) {
    if (kernel.dim() != phi.dim()) throw DimMismatch("diff_const dims differ");
    int n = kernel.degree();
    int out_deg = std::max(phi.max_degree() - n, 0);
    ChaosVector out(phi.params(), phi.dim(), phi.role(), phi.basis(), out_deg);
    for (int m = n; m <= phi.max_degree(); ++m) {
        if (phi.kernel(m).is_zero()) continue;
        double factor = 1.0;
        for (int j = m - n + 1; j <= m; ++j) factor *= j; // m!/(m-n)!
        out.kernel(m - n) += factor * contract(phi.kernel(m), kernel);
    }
    return out;
}

ChaosVector gateaux_apply(const std::vector<Cplx>& y, const ChaosVector& phi) {
    return diff_const_apply(SymTensor::vector(y), phi);
}

ChaosVector annihilation_apply(const AppellSystem& sys, int k, const ChaosVector& v) {
    (void)sys;
    if (k < 0 || k >= v.dim()) throw DimMismatch("annihilation index out of range");
    std::vector<Cplx> e(v.dim(), 0.0);
    e[k] = 1.0;
    return gateaux_apply(e, v);
}

ChaosVector creation_apply(const AppellSystem& sys, int k, const ChaosVector& v) {
    if (k < 0 || k >= v.dim()) throw DimMismatch("creation index out of range");
    const ChaosVector* q = &v;
    ChaosVector embedded;
    if (v.role() == Role::TestFunction) {
        embedded = sys.q_embed(v, sys.max_degree() - 1);
        q = &embedded;
    }
    int top = q->top_degree();
    if (top + 1 > sys.max_degree())
        throw TruncationOverflow("creation output exceeds truncation budget");
    ChaosVector out(q->params(), q->dim(), Role::Distribution, Basis::AppellP,
                    std::max(top + 1, 0));
    std::vector<Cplx> e(v.dim(), 0.0);
    e[k] = 1.0;
    SymTensor ek = SymTensor::vector(e);
    for (int n = 0; n <= top; ++n) {
        if (q->kernel(n).is_zero()) continue;
        out.kernel(n + 1) += sym_product(q->kernel(n), ek);
    }
    return out;
}

ChaosVector translate_apply(const std::vector<Cplx>& y, const ChaosVector& phi) {
    if (static_cast<int>(y.size()) != phi.dim()) throw DimMismatch("translate dims");
    if (phi.role() != Role::TestFunction)
        throw BasisMismatch("translate acts on test functions");
    int top = phi.max_degree();
    ChaosVector out(phi.params(), phi.dim(), phi.role(), phi.basis(), top);
    for (int k = 0; k <= top; ++k) {
        for (int n = 0; n + k <= top; ++n) {
            if (phi.kernel(n + k).is_zero()) continue;
            out.kernel(k) += binomial(n + k, k) *
                             contract(phi.kernel(n + k), SymTensor::vector_power(y, n));
        }
    }
    return out;
}

ChaosVector exp_gateaux_apply(const std::vector<Cplx>& y, const ChaosVector& phi, int K) {
    ChaosVector acc = phi;
    ChaosVector cur = phi;
    double fact = 1.0;
    for (int j = 1; j <= K; ++j) {
        cur = gateaux_apply(y, cur);
        fact *= j;
        if (cur.top_degree() < 0) break;
        ChaosVector scaled = (1.0 / fact) * cur;
        scaled.resize_degree(acc.max_degree());
        acc += scaled;
    }
    return acc;
}

ChaosVector scale_apply(double c, const ChaosVector& phi) {
    if (phi.basis() != Basis::Monomial)
        throw BasisMismatch("scale needs a monomial-basis vector; convert first");
    ChaosVector out = phi;
    double cm = 1.0;
    for (int m = 0; m <= out.max_degree(); ++m) {
        if (m > 0) cm *= c;
        out.kernel(m) *= cm;
    }
    return out;
}

ChaosVector integral_kernel_apply(const AppellSystem& sys, const KernelLM& kappa,
                                  const ChaosVector& phi) {
    if (kappa.dim != phi.dim()) throw DimMismatch("integral kernel dims differ");
    if (phi.role() != Role::TestFunction)
        throw BasisMismatch("integral kernel operators act on test functions");
    if (kappa.l + kappa.m > sys.moment_budget())
        throw TruncationOverflow("l + m beyond the truncation budget");

    int embed_deg = sys.max_degree() - kappa.l;
    if (embed_deg < 0) throw TruncationOverflow("creation count exceeds budget");

    // group by creation key: Xi = sum_k mult(k) crt_k( embed( sum_l mult(l)
    // kappa[k,l] D_l phi ) )
    std::map<MultiIndex, ChaosVector> pieces;
    for (const auto& [key, v] : kappa.entries) {
        const MultiIndex& ck = key.first;
        const MultiIndex& ak = key.second;
        ChaosVector d = multi_annihilate(phi, ak);
        d *= v * multiset_multiplicity(ak);
        auto it = pieces.find(ck);
        if (it == pieces.end())
            pieces.emplace(ck, std::move(d));
        else
            it->second += d;
    }

    ChaosVector out(phi.params(), phi.dim(), Role::Distribution, Basis::AppellP,
                    sys.max_degree());
    for (const auto& [ck, piece] : pieces) {
        ChaosVector q;
        try {
            q = sys.q_embed(piece, embed_deg);
        } catch (const DegreeOverflow& e) {
            throw TruncationOverflow(e.what());
        }
        SymTensor c = direction_tensor(phi.dim(), ck);
        double mult = multiset_multiplicity(ck);
        for (int n = 0; n <= q.max_degree(); ++n) {
            if (q.kernel(n).is_zero()) continue;
            out.kernel(n + kappa.l) += mult * sym_product(q.kernel(n), c);
        }
    }
    return out;
}

KernelLM eta_form(const AppellSystem& sys, int l, int m, const ChaosVector& phi,
                  const ChaosVector& psi) {
    if (phi.dim() != psi.dim()) throw DimMismatch("eta_form dims differ");
    KernelLM eta;
    eta.l = l;
    eta.m = m;
    eta.dim = phi.dim();
    // cache the annihilated pieces per sorted tuple
    std::map<MultiIndex, ChaosVector> dphi, dpsi;
    for (const auto& ak : all_multisets(phi.dim(), m))
        dphi.emplace(ak, multi_annihilate(phi, ak));
    for (const auto& ck : all_multisets(phi.dim(), l))
        dpsi.emplace(ck, multi_annihilate(psi, ck));
    for (const auto& [ck, dp] : dpsi) {
        for (const auto& [ak, df] : dphi) {
            Cplx v = sys.l2_pairing_bilinear(df, dp);
            if (v != Cplx(0.0)) eta.entries[{ck, ak}] = v;
        }
    }
    return eta;
}

OperatorRep OperatorRep::identity(int dim) {
    OperatorRep op;
    op.kind_ = OpKind::Identity;
    op.dim_ = dim;
    return op;
}

OperatorRep OperatorRep::diff_const(SymTensor kernel) {
    OperatorRep op;
    op.kind_ = OpKind::DiffConst;
    op.dim_ = kernel.dim();
    op.diff_kernel_ = std::move(kernel);
    return op;
}

OperatorRep OperatorRep::gateaux(std::vector<Cplx> y) {
    OperatorRep op;
    op.kind_ = OpKind::Gateaux;
    op.dim_ = static_cast<int>(y.size());
    op.y_ = std::move(y);
    return op;
}

OperatorRep OperatorRep::creation(int k, int dim) {
    OperatorRep op;
    op.kind_ = OpKind::Creation;
    op.dim_ = dim;
    op.k_ = k;
    return op;
}

OperatorRep OperatorRep::annihilation(int k, int dim) {
    OperatorRep op;
    op.kind_ = OpKind::Annihilation;
    op.dim_ = dim;
    op.k_ = k;
    return op;
}

OperatorRep OperatorRep::translate(std::vector<Cplx> y) {
    OperatorRep op;
    op.kind_ = OpKind::Translate;
    op.dim_ = static_cast<int>(y.size());
    op.y_ = std::move(y);
    return op;
}

OperatorRep OperatorRep::scale(double c, int dim) {
    OperatorRep op;
    op.kind_ = OpKind::Scale;
    op.dim_ = dim;
    op.c_ = c;
    return op;
}

OperatorRep OperatorRep::integral_kernel(KernelLM kappa) {
    OperatorRep op;
    op.kind_ = OpKind::IntegralKernel;
    op.dim_ = kappa.dim;
    op.kappa_ = std::move(kappa);
    return op;
}

OperatorRep OperatorRep::composition(std::vector<OperatorRep> ops) {
    OperatorRep op;
    op.kind_ = OpKind::Composition;
    op.dim_ = ops.empty() ? 1 : ops.front().dim();
    op.parts_ = std::move(ops);
    return op;
}

ChaosVector OperatorRep::apply(const AppellSystem& sys, const ChaosVector& v) const {
    switch (kind_) {
        case OpKind::Identity:
            return v;
        case OpKind::DiffConst:
            return diff_const_apply(diff_kernel_, v);
        case OpKind::Gateaux:
            return gateaux_apply(y_, v);
        case OpKind::Creation:
            return creation_apply(sys, k_, v);
        case OpKind::Annihilation:
            return annihilation_apply(sys, k_, v);
        case OpKind::Translate:
            return translate_apply(y_, v);
        case OpKind::Scale: {
            if (v.basis() == Basis::Monomial) return scale_apply(c_, v);
            return scale_apply(c_, sys.to_monomial(v));
        }
        case OpKind::IntegralKernel:
            return integral_kernel_apply(sys, kappa_, v);
        case OpKind::Composition: {
            ChaosVector cur = v;
            for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) {
                cur = it->apply(sys, cur);
                if (cur.max_degree() > sys.max_degree())
                    cur.resize_degree(sys.max_degree()); // re-truncate per stage
            }
            return cur;
        }
    }
    throw InvalidArgument("unknown operator kind");
}

std::string OperatorRep::kind_name() const {
    switch (kind_) {
        case OpKind::Identity: return "identity";
        case OpKind::DiffConst: return "diff_const";
        case OpKind::Gateaux: return "gateaux";
        case OpKind::Creation: return "creation";
        case OpKind::Annihilation: return "annihilation";
        case OpKind::Translate: return "translate";
        case OpKind::Scale: return "scale";
        case OpKind::IntegralKernel: return "integral_kernel";
        case OpKind::Composition: return "composition";
    }
    return "unknown";
}

Cplx symbol(const AppellSystem& sys, const OperatorRep& op,
            const std::vector<Cplx>& xi, const std::vector<Cplx>& eta, int N) {
    ExpVector exi = exp_vector(sys, xi, N);
    ChaosVector X = op.apply(sys, exi.body);
    if (X.role() == Role::Distribution) {
        return s_transform(sys, X, eta);
    }
    ExpVector eet = exp_vector(sys, eta, N);
    return sys.l2_pairing_bilinear(X, eet.body);
}

Cplx symbol_via_s(const AppellSystem& sys, const OperatorRep& op,
                  const std::vector<Cplx>& xi, const std::vector<Cplx>& eta, int N) {
    ExpVector exi = exp_vector(sys, xi, N);
    ChaosVector X = op.apply(sys, exi.body);
    if (X.role() == Role::TestFunction) {
        int embed_deg = std::min(sys.max_degree(), sys.moment_budget() - X.top_degree());
        X = sys.q_embed(X, embed_deg);
    }
    return s_transform(sys, X, eta);
}

std::optional<Cplx> symbol_closed_form(const MLParams& params, const OperatorRep& op,
                                       const std::vector<Cplx>& xi,
                                       const std::vector<Cplx>& eta) {
    Cplx ihat = exp_pairing(params, xi, eta);
    switch (op.kind()) {
        case OpKind::Identity:
            return ihat;
        case OpKind::Gateaux:
            return bilinear(op.direction(), xi) * ihat;
        case OpKind::DiffConst:
            return pairing(op.diff_kernel(),
                           SymTensor::vector_power(xi, op.diff_kernel().degree())) * ihat;
        case OpKind::Annihilation:
            return xi[op.basis_index()] * ihat;
        case OpKind::Creation:
            return eta[op.basis_index()] * ihat;
        case OpKind::Translate:
            return std::exp(bilinear(op.direction(), xi)) * ihat;
        case OpKind::IntegralKernel: {
            // << crt_k ann_l e(xi), e(eta) >> = xi^l eta^k Ihat
            Cplx acc = 0.0;
            for (const auto& [key, v] : op.kernel_lm().entries) {
                Cplx w = v * multiset_multiplicity(key.first) *
                         multiset_multiplicity(key.second);
                for (int j : key.first) w *= eta[j];
                for (int j : key.second) w *= xi[j];
                acc += w;
            }
            return acc * ihat;
        }
        default:
            return std::nullopt;
    }
}

Cplx mehler_exp(const MLParams& params, double t, const std::vector<double>& y,
                const std::vector<double>& xi) {
    if (t < 0.0) throw InvalidArgument("mehler_exp needs t >= 0");
    if (y.size() != xi.size()) throw DimMismatch("mehler_exp dims differ");
    double dot = 0.0, q = 0.0;
    for (std::size_t k = 0; k < y.size(); ++k) {
        dot += y[k] * xi[k];
        q += xi[k] * xi[k];
    }
    double decay = std::exp(-t);
    Cplx phase = std::exp(Cplx(0.0, decay * dot));
    Cplx damp = mittag_leffler(params, Cplx(-0.5 * (1.0 - decay * decay) * q, 0.0));
    return phase * damp;
}

double mehler_semigroup_defect(const MLParams& params, double t, double s,
                               const std::vector<double>& xi) {
    if (t < 0.0 || s < 0.0) throw InvalidArgument("defect needs t, s >= 0");
    double q = 0.0;
    for (double x : xi) q += x * x;
    auto E = [&](double a) { return mittag_leffler(params, Cplx(-a, 0.0)).real(); };
    double e2s = std::exp(-2.0 * s);
    double e2t = std::exp(-2.0 * t);
    double lhs = E(0.5 * (1.0 - e2s) * q) * E(0.5 * (1.0 - e2t) * e2s * q);
    double rhs = E(0.5 * (1.0 - e2t * e2s) * q);
    return std::fabs(lhs - rhs);
}

namespace {

ChaosVector random_test_vector(const AppellSystem& sys, int top, unsigned long long seed,
                               unsigned long long stream) {
    ChaosVector v(sys.params(), sys.dim(), Role::TestFunction, Basis::AppellP, top);
    std::uint64_t draw = 0;
    for (int n = 0; n <= top; ++n)
        for (const auto& mi : all_multisets(sys.dim(), n))
            v.kernel(n).set(mi, Cplx(2.0 * rng::uniform(seed, stream, draw++) - 1.0, 0.0));
    return v;
}

std::vector<Cplx> random_direction(int dim, unsigned long long seed,
                                   unsigned long long stream) {
    std::vector<Cplx> y(dim);
    for (int k = 0; k < dim; ++k)
        y[k] = Cplx(2.0 * rng::uniform(seed, stream, 1000 + k) - 1.0, 0.0);
    return y;
}

void finalize(BoundReport& r) {
    double mx = 0.0, mean = 0.0;
    for (const auto& c : r.cases) {
        mx = std::max(mx, c.ratio);
        mean += c.ratio;
    }
    r.max_ratio = mx;
    r.mean_ratio = r.cases.empty() ? 0.0 : mean / r.cases.size();
}

} // namespace

BoundReport bound_report_translation(const AppellSystem& sys, int p, int q,
                                     int count, unsigned long long seed) {
    BoundReport rep;
    rep.kind = "translation";
    rep.p = p;
    rep.q = q;
    double shrink = 1.0 - std::pow(2.0, -2.0 * q); // sign-corrected 2^{2q} -> 2^{-2q}
    for (int i = 0; i < count; ++i) {
        ChaosVector phi = random_test_vector(sys, std::min(4, sys.max_degree()), seed, i);
        std::vector<Cplx> y = random_direction(sys.dim(), seed, i);
        double ynorm = weighted_norm(SymTensor::vector(y), WeightProfile{-(p + q)});
        double lhs = test_norm(translate_apply(y, phi), p, q);
        double rhs = test_norm(phi, p + q, q) / std::sqrt(shrink) *
                     std::exp(ynorm * ynorm / (2.0 * shrink));
        rep.cases.push_back({lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0});
    }
    finalize(rep);
    return rep;
}

BoundReport bound_report_gateaux(const AppellSystem& sys, int p, int q,
                                 int count, unsigned long long seed) {
    BoundReport rep;
    rep.kind = "gateaux";
    rep.p = p;
    rep.q = q;
    double c = std::sqrt(std::pow(2.0, -2.0 * q) /
                         (2.0 * q * std::exp(1.0) * std::log(2.0)));
    for (int i = 0; i < count; ++i) {
        ChaosVector phi = random_test_vector(sys, std::min(4, sys.max_degree()), seed, 7000 + i);
        std::vector<Cplx> y = random_direction(sys.dim(), seed, 7000 + i);
        double ynorm = weighted_norm(SymTensor::vector(y), WeightProfile{-(p + q)});
        double lhs = test_norm(gateaux_apply(y, phi), p, q);
        double rhs = c * ynorm * test_norm(phi, p + q, q);
        rep.cases.push_back({lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0});
    }
    finalize(rep);
    return rep;
}

BoundReport bound_report_integral_kernel(const AppellSystem& sys, int p, int q,
                                         int count, unsigned long long seed) {
    BoundReport rep;
    rep.kind = "integral_kernel";
    rep.p = p;
    rep.q = q;
    const int l = 1, m = 1;
    double c = std::pow(2.0, -p) * std::sqrt(static_cast<double>(l) * m) *
               std::pow(std::pow(2.0, -p) / (2.0 * p * std::exp(1.0) * std::log(2.0)),
                        0.5 * (l + m));
    for (int i = 0; i < count; ++i) {
        ChaosVector phi = random_test_vector(sys, std::min(3, sys.max_degree() - l),
                                             seed, 9000 + i);
        SymTensor kappa(sys.dim(), l + m);
        std::uint64_t draw = 0;
        for (const auto& mi : all_multisets(sys.dim(), l + m))
            kappa.set(mi, Cplx(2.0 * rng::uniform(seed, 9000 + i, 500 + draw++) - 1.0, 0.0));
        KernelLM klm = KernelLM::from_sym_tensor(l, m, kappa);
        double lhs = distribution_norm(integral_kernel_apply(sys, klm, phi), p, q);
        double rhs = c * weighted_norm(kappa, WeightProfile{-p}) * test_norm(phi, p, q);
        rep.cases.push_back({lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0});
    }
    finalize(rep);
    return rep;
}

} // namespace mlcalc
