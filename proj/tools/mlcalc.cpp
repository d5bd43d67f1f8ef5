// mlcalc: command line front end for Mittag-Leffler analysis.
//
// Subcommands: ml-eval, verify, symbol-grid, mehler, sample.
// Exit codes: 0 ok, 1 verification failure, 2 usage or domain error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mlcalc/json_io.hpp"
#include "mlcalc/measure_mc.hpp"
#include "mlcalc/operators.hpp"
#include "mlcalc/rng.hpp"

using namespace mlcalc;

namespace {

struct RunConfig {
    double beta = 0.5;
    int dim = 2;
    int trunc = 8;
    std::uint64_t seed = 12345;
    std::int64_t samples = 100000;
    std::string out;
    std::string format = "csv";
    int threads = 1;
    bool deterministic = false;

    MLParams params() const {
        MLParams p;
        p.beta = beta;
        return p;
    }
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--beta", cfg.beta, "Mittag-Leffler order in (0,1]");
    cmd->add_option("--dim", cfg.dim, "ambient dimension d");
    cmd->add_option("--trunc", cfg.trunc, "chaos truncation degree N");
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    cmd->add_option("--out", cfg.out, "output path (stdout when omitted)");
    cmd->add_option("--format", cfg.format, "output format: csv, json, or bin (sample export)")
        ->check(CLI::IsMember({"csv", "json", "bin"}));
    cmd->add_option("--threads", cfg.threads, "worker cap (results unchanged)");
    cmd->add_flag("--deterministic", cfg.deterministic,
                  "suppress the timestamp field in reports");
}

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw InvalidArgument("cannot open output file " + cfg.out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
    return out;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string data_dir() {
    const char* env = std::getenv("MLCALC_DATA_DIR");
    return env ? std::string(env) : std::string("data");
}

// ---------------------------------------------------------------- ml-eval

int cmd_ml_eval(const RunConfig& cfg, double zmin, double zmax, int count) {
    MLParams p = cfg.params();
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "z,e_beta,e_beta_beta,m_wright\n";
    for (int i = 0; i < count; ++i) {
        double z = count == 1 ? zmin : zmin + (zmax - zmin) * i / (count - 1);
        double e = mittag_leffler(p, Cplx(z, 0.0)).real();
        double eb = mittag_leffler_general(p, p.beta, Cplx(z, 0.0)).real();
        bool has_mw = p.beta < 1.0;
        double mw = has_mw ? m_wright(p, std::fabs(z)) : 0.0;
        csv << fmt(z) << ',' << fmt(e) << ',' << fmt(eb) << ','
            << (has_mw ? fmt(mw) : "") << '\n';
        Json row{{"z", z}, {"e_beta", e}, {"e_beta_beta", eb}};
        if (has_mw) row["m_wright"] = mw;
        rows.push_back(row);
    }
    if (cfg.format == "json")
        write_output(cfg, Json{{"beta", cfg.beta}, {"rows", rows}}.dump(2));
    else
        write_output(cfg, csv.str());
    return 0;
}

// ---------------------------------------------------------------- verify

struct Check {
    std::string name;
    std::string ref;
    std::string status; // pass | fail | reported | underpowered
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    double sigmas = -1.0;
};

struct Suite {
    std::string name;
    std::vector<Check> checks;

    void assert_close(const std::string& name, const std::string& ref, double lhs,
                      double rhs, double tol) {
        Check c{name, ref, std::fabs(lhs - rhs) <= tol ? "pass" : "fail",
                lhs, rhs, tol};
        checks.push_back(c);
    }
    void assert_sigma(const std::string& name, const std::string& ref,
                      const MCEstimate& est, Cplx analytic, double band,
                      bool underpowered) {
        Check c;
        c.name = name;
        c.ref = ref;
        c.lhs = std::abs(est.value);
        c.rhs = std::abs(analytic);
        c.tol = band;
        c.sigmas = est.sigmas_from(analytic);
        c.status = underpowered ? "underpowered" : (c.sigmas <= band ? "pass" : "fail");
        checks.push_back(c);
    }
    void report(const std::string& name, const std::string& ref, double lhs,
                double rhs) {
        checks.push_back({name, ref, "reported", lhs, rhs, 0.0});
    }
    int failures() const {
        int n = 0;
        for (const auto& c : checks)
            if (c.status == "fail") ++n;
        return n;
    }
};

std::vector<Cplx> random_cvec(int d, std::uint64_t seed, std::uint64_t stream,
                              double scale) {
    std::vector<Cplx> v(d);
    for (int k = 0; k < d; ++k)
        v[k] = Cplx(scale * (2.0 * rng::uniform(seed, stream, k) - 1.0), 0.0);
    return v;
}

std::vector<double> random_rvec(int d, std::uint64_t seed, std::uint64_t stream,
                                double scale) {
    std::vector<double> v(d);
    for (int k = 0; k < d; ++k)
        v[k] = scale * (2.0 * rng::uniform(seed, stream, k) - 1.0);
    return v;
}

ChaosVector random_test(const AppellSystem& sys, int top, std::uint64_t seed,
                        std::uint64_t stream) {
    ChaosVector v(sys.params(), sys.dim(), Role::TestFunction, Basis::AppellP, top);
    std::uint64_t draw = 0;
    for (int n = 0; n <= top; ++n)
        for (const auto& mi : all_multisets(sys.dim(), n))
            v.kernel(n).set(mi,
                            Cplx(2.0 * rng::uniform(seed, stream, draw++) - 1.0, 0.0));
    return v;
}

Suite run_suite_appell(const RunConfig& cfg) {
    Suite s{"appell", {}};
    MLParams p = cfg.params();
    int d = std::min(cfg.dim, 3);
    AppellSystem sys(p, d, std::max(cfg.trunc, 8));

    auto c = appell_coeffs(p, 20);
    double worst = 0.0;
    for (int n = 1; n <= 20; ++n) {
        double acc = c.b[n];
        for (int k = 1; k <= n; ++k)
            acc += c.b[n - k] * gamma_reciprocal(p.beta * k + 1.0);
        worst = std::max(worst, std::fabs(acc));
    }
    s.assert_close("b_n recursion residual (n<=20)", "appell.recursion", worst, 0.0, 1e-12);

    MLParams p1 = p;
    p1.beta = 1.0;
    auto c1 = appell_coeffs(p1, 12);
    double w1 = 0.0, f = 1.0;
    for (int n = 0; n <= 12; ++n) {
        if (n) f *= n;
        w1 = std::max(w1, std::fabs(c1.b[n] - (n % 2 ? -1.0 : 1.0) / f));
    }
    s.assert_close("beta=1 coefficients (-1)^n/n!", "appell.gaussian-coeffs", w1, 0.0, 1e-13);

    double shift = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        auto x = random_cvec(d, cfg.seed, 300 + trial, 1.0);
        auto y = random_cvec(d, cfg.seed, 400 + trial, 1.0);
        std::vector<Cplx> xy(d);
        for (int k = 0; k < d; ++k) xy[k] = x[k] + y[k];
        int n = 1 + trial % 6;
        SymTensor lhs = sys.appell_kernel(xy, n);
        SymTensor rhs(d, n);
        for (int k = 0; k <= n; ++k)
            rhs += binomial(n, k) *
                   sym_product(sys.appell_kernel(x, k), SymTensor::vector_power(y, n - k));
        shift = std::max(shift, max_entry_diff(lhs, rhs));
    }
    s.assert_close("P_n(x+y) shift identity (50 random)", "appell.shift", shift, 0.0, 1e-9);

    ChaosVector v = random_test(sys, 8, cfg.seed, 500);
    ChaosVector back = sys.to_appell(sys.to_monomial(v));
    double rt = 0.0;
    for (int n = 0; n <= 8; ++n)
        rt = std::max(rt, max_entry_diff(back.kernel(n), v.kernel(n)));
    s.assert_close("basis round trip deg<=8", "appell.roundtrip", rt, 0.0, 1e-10);

    AppellSystem s1(p1, 1, 8);
    double hw = 0.0;
    for (double w : {-2.0, 0.0, 2.0}) {
        double he0 = 1.0, he1 = w;
        for (int n = 0; n <= 8; ++n) {
            double he = n == 0 ? 1.0 : he1;
            Cplx got = pairing(s1.appell_kernel({Cplx(w, 0.0)}, n),
                               SymTensor::vector_power({Cplx(1.0, 0.0)}, n));
            hw = std::max(hw, std::abs(got - he));
            if (n >= 1) {
                double nxt = w * he1 - n * he0;
                he0 = he1;
                he1 = nxt;
            }
        }
    }
    s.assert_close("Hermite limit beta=1 d=1", "appell.hermite-limit", hw, 0.0, 1e-10);

    ChaosVector one(p, d, Role::TestFunction, Basis::AppellP, 0);
    one.kernel(0).set({}, 1.0);
    double p4 = 0.0;
    for (int m = 1; m <= 6; ++m) {
        ChaosVector pm(p, d, Role::TestFunction, Basis::AppellP, m);
        std::uint64_t draw = 0;
        for (const auto& mi : all_multisets(d, m))
            pm.kernel(m).set(mi, Cplx(2.0 * rng::uniform(cfg.seed, 600 + m, draw++) - 1.0, 0.0));
        p4 = std::max(p4, std::abs(sys.l2_pairing(pm, one)));
    }
    s.assert_close("E[<P_m, phi>] = 0, m=1..6", "appell.zero-mean", p4, 0.0, 1e-10);

    double bi = 0.0;
    for (int n = 0; n <= 5; ++n) {
        ChaosVector Qn(p, d, Role::Distribution, Basis::AppellP, n);
        std::uint64_t draw = 0;
        for (const auto& mi : all_multisets(d, n))
            Qn.kernel(n).set(mi, Cplx(2.0 * rng::uniform(cfg.seed, 700 + n, draw++) - 1.0, 0.0));
        ChaosVector u = sys.q_realize(Qn, 7);
        for (int m = 0; m <= 5; ++m) {
            ChaosVector pm(p, d, Role::TestFunction, Basis::AppellP, m);
            std::uint64_t dd = 0;
            for (const auto& mi : all_multisets(d, m))
                pm.kernel(m).set(mi, Cplx(2.0 * rng::uniform(cfg.seed, 800 + 10 * n + m, dd++) - 1.0, 0.0));
            Cplx got = sys.l2_pairing_bilinear(u, pm);
            Cplx want = (m == n) ? factorial(n) * pairing(Qn.kernel(n), pm.kernel(m))
                                 : Cplx(0.0, 0.0);
            bi = std::max(bi, std::abs(got - want));
        }
    }
    s.assert_close("biorthogonality via L2 loop (n,m<=5)", "appell.biorthogonality",
                   bi, 0.0, 1e-8);
    return s;
}

Suite run_suite_transforms(const RunConfig& cfg) {
    Suite s{"transforms", {}};
    MLParams p = cfg.params();
    int d = std::min(cfg.dim, 3);
    int N = std::max(cfg.trunc, 8);
    AppellSystem sys(p, d, N);

    // S(Phi)(0) = Phi^(0)
    ChaosVector Phi(p, d, Role::Distribution, Basis::AppellP, 3);
    Phi.kernel(0).set({}, 2.5);
    std::uint64_t draw = 0;
    for (int n = 1; n <= 3; ++n)
        for (const auto& mi : all_multisets(d, n))
            Phi.kernel(n).set(mi, Cplx(2.0 * rng::uniform(cfg.seed, 900 + n, draw++) - 1.0, 0.0));
    Cplx at0 = s_transform(sys, Phi, std::vector<Cplx>(d, 0.0));
    s.assert_close("S(Phi)(0) = Phi^(0)", "stransform.at-zero", std::abs(at0 - Cplx(2.5)),
                   0.0, 1e-14);

    // polynomiality along a ray: degree-N fit predicts fresh nodes
    {
        auto xi1 = random_cvec(d, cfg.seed, 910, 0.1);
        auto xi2 = random_cvec(d, cfg.seed, 911, 0.1);
        int deg = Phi.max_degree();
        std::vector<double> nodes(deg + 1);
        std::vector<Cplx> vals(deg + 1);
        for (int i = 0; i <= deg; ++i) {
            nodes[i] = -0.5 + 1.0 * i / deg;
            std::vector<Cplx> xi(d);
            for (int k = 0; k < d; ++k) xi[k] = xi1[k] + nodes[i] * xi2[k];
            vals[i] = s_transform(sys, Phi, xi);
        }
        // Newton divided differences
        std::vector<Cplx> coef = vals;
        for (int j = 1; j <= deg; ++j)
            for (int i = deg; i >= j; --i)
                coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j]);
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            double lam = -0.45 + 0.09 * t + 0.031;
            std::vector<Cplx> xi(d);
            for (int k = 0; k < d; ++k) xi[k] = xi1[k] + lam * xi2[k];
            Cplx pred = coef[deg];
            for (int i = deg - 1; i >= 0; --i)
                pred = pred * (lam - nodes[i]) + coef[i];
            worst = std::max(worst, std::abs(pred - s_transform(sys, Phi, xi)));
        }
        s.assert_close("S-transform ray polynomiality", "stransform.polynomial-ray",
                       worst, 0.0, 1e-9);
    }

    // T(Q_0(1))(phi) = E_beta(-<phi,phi>/2)
    {
        ChaosVector q0(p, d, Role::Distribution, Basis::AppellP, 0);
        q0.kernel(0).set({}, 1.0);
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            auto phi = random_cvec(d, cfg.seed, 920 + t, 0.8);
            Cplx got = t_transform(sys, q0, phi);
            Cplx want = mittag_leffler(p, -0.5 * bilinear_self(phi));
            worst = std::max(worst, std::abs(got - want));
        }
        s.assert_close("T(Q_0(1)) = characteristic function", "ttransform.charfn",
                       worst, 0.0, 1e-12);
    }

    // exponential vector pointwise
    {
        AppellSystem sys20(p, d, 20);
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            auto xi = random_cvec(d, cfg.seed, 930 + t, 0.5 / std::sqrt(double(d)));
            auto om = random_cvec(d, cfg.seed, 940 + t, 2.0 / std::sqrt(double(d)));
            ExpVector ev = exp_vector(sys20, xi, 20);
            Cplx got = sys20.evaluate(ev.body, om);
            Cplx ref = std::exp(bilinear(om, xi)) / mittag_leffler(p, 0.5 * bilinear_self(xi));
            worst = std::max(worst, std::abs(got - ref));
        }
        s.assert_close("exp vector pointwise (N=20)", "expvector.pointwise", worst,
                       0.0, 1e-8);
    }

    // exp_pairing symmetry and truncated-L2 agreement
    {
        auto xi = random_cvec(d, cfg.seed, 950, 0.4 / std::sqrt(double(d)));
        auto eta = random_cvec(d, cfg.seed, 951, 0.4 / std::sqrt(double(d)));
        Cplx a = exp_pairing(p, xi, eta), b = exp_pairing(p, eta, xi);
        s.assert_close("exp_pairing symmetry", "exppairing.symmetric", std::abs(a - b),
                       0.0, 1e-13);
        AppellSystem sys12(p, d, 12);
        ExpVector ex = exp_vector(sys12, xi, 12), ee = exp_vector(sys12, eta, 12);
        Cplx viaL2 = sys12.l2_pairing_bilinear(ex.body, ee.body);
        s.assert_close("exp_pairing closed form vs truncated L2",
                       "exppairing.closed-form", std::abs(a - viaL2), 0.0, 1e-8);
    }
    return s;
}

Suite run_suite_operators(const RunConfig& cfg) {
    Suite s{"operators", {}};
    MLParams p = cfg.params();
    int d = std::min(cfg.dim, 3);
    int N = std::max(cfg.trunc, 8);
    AppellSystem sys(p, d, N);

    // linearity on a random operator sample
    {
        double worst = 0.0;
        std::vector<OperatorRep> ops;
        ops.push_back(OperatorRep::gateaux(random_cvec(d, cfg.seed, 1000, 1.0)));
        ops.push_back(OperatorRep::translate(random_cvec(d, cfg.seed, 1001, 1.0)));
        ops.push_back(OperatorRep::identity(d));
        for (const auto& op : ops) {
            ChaosVector f = random_test(sys, 4, cfg.seed, 1010);
            ChaosVector g = random_test(sys, 4, cfg.seed, 1011);
            Cplx a(0.7, 0.0), b(-1.3, 0.0);
            ChaosVector lhs = op.apply(sys, a * f + b * g);
            ChaosVector rhs = a * op.apply(sys, f) + b * op.apply(sys, g);
            for (int n = 0; n <= lhs.max_degree(); ++n)
                worst = std::max(worst, max_entry_diff(lhs.kernel(n), rhs.kernel(n)));
        }
        s.assert_close("linearity", "operators.linearity", worst, 0.0, 1e-10);
    }

    // translate group law and exp(D_y) agreement
    {
        auto y = random_cvec(d, cfg.seed, 1020, 1.0);
        auto z = random_cvec(d, cfg.seed, 1021, 1.0);
        std::vector<Cplx> yz(d);
        for (int k = 0; k < d; ++k) yz[k] = y[k] + z[k];
        ChaosVector f = random_test(sys, 6, cfg.seed, 1022);
        ChaosVector a = translate_apply(y, translate_apply(z, f));
        ChaosVector b = translate_apply(yz, f);
        double worst = 0.0;
        for (int n = 0; n <= 6; ++n)
            worst = std::max(worst, max_entry_diff(a.kernel(n), b.kernel(n)));
        s.assert_close("translate(y) o translate(z) = translate(y+z)",
                       "translate.group", worst, 0.0, 1e-9);
        ChaosVector c = exp_gateaux_apply(y, f, 6);
        ChaosVector e = translate_apply(y, f);
        double worst2 = 0.0;
        for (int n = 0; n <= 6; ++n)
            worst2 = std::max(worst2, max_entry_diff(c.kernel(n), e.kernel(n)));
        s.assert_close("exp(D_y) = translate on polynomials", "translate.exp-gateaux",
                       worst2, 0.0, 1e-10);
    }

    // symbol two-route agreement and closed forms; N = 12 keeps the
    // exponential truncation tail well under the 1e-8 tolerance at |xi| <= 0.4
    {
        int Ns = std::max(cfg.trunc, 12);
        AppellSystem sym_sys(p, d, Ns);
        double worst_two = 0.0, worst_gate = 0.0, worst_ik = 0.0, worst_id = 0.0;
        for (int t = 0; t < 10; ++t) {
            auto xi = random_cvec(d, cfg.seed, 1100 + t, 0.4 / std::sqrt(double(d)));
            auto eta = random_cvec(d, cfg.seed, 1200 + t, 0.4 / std::sqrt(double(d)));
            auto psi = random_cvec(d, cfg.seed, 1300 + t, 1.0);
            OperatorRep g = OperatorRep::gateaux(psi);
            Cplx sa = symbol(sym_sys, g, xi, eta, Ns);
            Cplx sb = symbol_via_s(sym_sys, g, xi, eta, Ns);
            worst_two = std::max(worst_two, std::abs(sa - sb));
            worst_gate = std::max(worst_gate,
                                  std::abs(sa - *symbol_closed_form(p, g, xi, eta)));
            OperatorRep id = OperatorRep::identity(d);
            worst_id = std::max(worst_id, std::abs(symbol(sym_sys, id, xi, eta, Ns) -
                                                   *symbol_closed_form(p, id, xi, eta)));
            std::vector<std::vector<Cplx>> A(d, std::vector<Cplx>(d));
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    A[i][j] = Cplx(2.0 * rng::uniform(cfg.seed, 1400 + t, i * d + j) - 1.0, 0.0);
            OperatorRep ik = OperatorRep::integral_kernel(KernelLM::from_matrix(A));
            worst_ik = std::max(worst_ik, std::abs(symbol(sym_sys, ik, xi, eta, Ns) -
                                                   *symbol_closed_form(p, ik, xi, eta)));
        }
        s.assert_close("symbol routes (a)/(b) agree", "symbol.two-routes", worst_two,
                       0.0, 1e-8);
        s.assert_close("symbol(D_psi) = <psi,xi> Ihat", "symbol.gateaux", worst_gate,
                       0.0, 1e-8);
        s.assert_close("symbol(identity) = Ihat", "symbol.identity", worst_id, 0.0, 1e-8);
        s.assert_close("symbol(Xi_{1,1}(A)) = <xi,A eta> Ihat", "symbol.xi11", worst_ik,
                       0.0, 1e-8);
    }

    // translation vs multiplication (re-derived identity): holds at beta=1,
    // fails by a positive margin for beta=0.5
    {
        auto check = [&](double beta) {
            MLParams pb = p;
            pb.beta = beta;
            std::vector<Cplx> xi = random_cvec(d, cfg.seed, 1500, 0.5 / std::sqrt(double(d)));
            std::vector<Cplx> eta = random_cvec(d, cfg.seed, 1501, 0.5 / std::sqrt(double(d)));
            std::vector<Cplx> xmie(d);
            for (int k = 0; k < d; ++k) xmie[k] = xi[k] - Cplx(0.0, 1.0) * eta[k];
            Cplx C_xi = mittag_leffler(pb, -0.5 * bilinear_self(xi));
            Cplx C_mix = mittag_leffler(pb, -0.5 * bilinear_self(xmie));
            Cplx lhs = C_xi / C_mix;
            Cplx rhs = std::exp(-Cplx(0.0, 1.0) * bilinear(eta, xi)) /
                       mittag_leffler(pb, 0.5 * bilinear_self(eta));
            return std::abs(lhs - rhs);
        };
        s.assert_close("translation/multiplication identity, beta=1",
                       "transmult.gaussian", check(1.0), 0.0, 1e-10);
        double margin = check(0.5);
        s.report("translation/multiplication margin, beta=0.5", "transmult.grey",
                 margin, 0.0);
        Check& last = s.checks.back();
        last.status = margin > 1e-6 ? "pass" : "fail"; // must fail by a real margin
    }

    // Mehler: beta=1 defect zero; baseline defect for beta=0.5
    {
        std::vector<double> xi{1.0};
        if (d >= 2) xi = {0.8, 0.6};
        while (static_cast<int>(xi.size()) < d) xi.push_back(0.0);
        MLParams p1 = p;
        p1.beta = 1.0;
        double worst = 0.0;
        for (double t : {0.0, 0.3, 0.8})
            for (double u : {0.0, 0.5, 1.2})
                worst = std::max(worst, mehler_semigroup_defect(p1, t, u, xi));
        s.assert_close("Mehler defect = 0 at beta=1", "mehler.gaussian-semigroup",
                       worst, 0.0, 1e-12);
        MLParams p05 = p;
        p05.beta = 0.5;
        double defect = mehler_semigroup_defect(p05, 0.5, 0.5, xi);
        s.assert_close("Mehler defect beta=0.5 vs stored baseline", "mehler.baseline",
                       defect, 1.43666316206294154e-02, 1e-9);
    }
    return s;
}

Suite run_suite_mc(const RunConfig& cfg) {
    Suite s{"mc", {}};
    MLParams p = cfg.params();
    int d = std::min(cfg.dim, 3);
    bool underpowered = cfg.samples < 1000;
    std::int64_t n = cfg.samples;

    for (double beta : {0.5, 0.75, 1.0}) {
        MLParams pb = p;
        pb.beta = beta;
        SampleBatch batch = sample_measure(pb, d, n, cfg.seed, false, cfg.threads);
        auto phi = random_rvec(d, cfg.seed, 2000, 1.0);
        double phi2 = 0.0;
        for (double x : phi) phi2 += x * x;
        MCEstimate m2 = mc_moment(batch, phi, 2);
        double ana2 = phi2 * gamma_reciprocal(beta + 1.0);
        s.assert_sigma("second moment beta=" + fmt(beta).substr(0, 4), "moments.even-power",
                       m2, Cplx(ana2, 0.0), 4.0, underpowered);
        MCEstimate m4 = mc_moment(batch, phi, 4);
        double ana4 = 6.0 * phi2 * phi2 * gamma_reciprocal(2.0 * beta + 1.0);
        s.assert_sigma("fourth moment beta=" + fmt(beta).substr(0, 4), "moments.even-power",
                       m4, Cplx(ana4, 0.0), 4.0, underpowered);
        MCEstimate m3 = mc_moment(batch, phi, 3);
        s.assert_sigma("odd moment beta=" + fmt(beta).substr(0, 4), "moments.odd-vanish",
                       m3, Cplx(0.0, 0.0), 4.0, underpowered);
    }

    {
        SampleBatch batch = sample_measure(p, d, n, cfg.seed, false, cfg.threads);
        for (int t = 0; t < 10; ++t) {
            auto phi = random_rvec(d, cfg.seed, 2100 + t, 2.0 / std::sqrt(double(d)));
            double phi2 = 0.0;
            for (double x : phi) phi2 += x * x;
            MCEstimate cf = mc_char_function(batch, phi);
            Cplx ana = mittag_leffler(p, Cplx(-0.5 * phi2, 0.0));
            s.assert_sigma("characteristic function #" + std::to_string(t),
                           "charfn.mittag-leffler", cf, ana, 4.0, underpowered);
        }
        auto phi = random_rvec(d, cfg.seed, 2200, 1.0);
        auto psi = random_rvec(d, cfg.seed, 2201, 1.0);
        double dot = 0.0;
        for (int k = 0; k < d; ++k) dot += phi[k] * psi[k];
        MCEstimate cov = mc_covariance_pair(batch, phi, psi);
        s.assert_sigma("covariance pair", "moments.covariance", cov,
                       Cplx(dot * gamma_reciprocal(p.beta + 1.0), 0.0), 4.0, underpowered);

        if (p.beta < 1.0) {
            auto taus = sample_subordinator(p.beta, n, cfg.seed);
            for (double sv : {0.5, 1.0, 2.0}) {
                MCEstimate lap = mc_laplace(taus, sv);
                Cplx ana = mittag_leffler(p, Cplx(-sv, 0.0));
                s.assert_sigma("subordinator Laplace s=" + fmt(sv).substr(0, 3),
                               "subordinator.laplace", lap, ana, 4.0, underpowered);
            }
            // box-kernel density vs M_beta on [0,3]; nominal band 0.01 at 1e6
            // samples, widened by the statistical factor below that count.
            // Near beta = 1 the density series stops converging at the default
            // term cap; the check is then reported as skipped rather than run
            // against a diverged reference.
            try {
                int bins = 50;
                auto dens = density_histogram(taus, 0.0, 3.0, bins);
                double sup = 0.0;
                for (int b = 0; b < bins; ++b) {
                    double mid = (b + 0.5) * 3.0 / bins;
                    sup = std::max(sup, std::fabs(dens[b] - m_wright(p, mid)));
                }
                double band =
                    0.01 * std::max(1.0, std::sqrt(1e6 / static_cast<double>(n)));
                Check c{"subordinator density sup-norm [0,3]", "subordinator.density",
                        underpowered ? "underpowered" : (sup <= band ? "pass" : "fail"),
                        sup, 0.0, band};
                s.checks.push_back(c);
            } catch (const NonConvergent&) {
                s.checks.push_back({"subordinator density sup-norm [0,3]",
                                    "subordinator.density", "skipped", 0.0, 0.0, 0.0});
            }
        }

        // exp_pairing against MC
        int N = std::max(cfg.trunc, 8);
        AppellSystem sys(p, d, N);
        auto xi = random_cvec(d, cfg.seed, 2300, 0.4 / std::sqrt(double(d)));
        ExpVector ev = exp_vector(sys, xi, N);
        MCEstimate pairmc = mc_pair(sys, batch, ev.body, ev.body, cfg.threads);
        Cplx ana = exp_pairing(p, xi, xi);
        s.assert_sigma("exponential pairing MC", "exppairing.mc", pairmc, ana, 4.0,
                       underpowered);
    }
    return s;
}

Suite run_suite_bounds(const RunConfig& cfg) {
    Suite s{"bounds", {}};
    MLParams p = cfg.params();
    int d = std::min(cfg.dim, 3);
    AppellSystem sys(p, d, std::max(cfg.trunc, 6));
    for (const auto& rep : {bound_report_translation(sys, 1, 1, 100, cfg.seed),
                            bound_report_gateaux(sys, 1, 1, 100, cfg.seed),
                            bound_report_integral_kernel(sys, 1, 1, 100, cfg.seed)}) {
        s.report("max LHS/RHS ratio: " + rep.kind, "bounds." + rep.kind, rep.max_ratio,
                 rep.mean_ratio);
    }
    return s;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite_name) {
    std::vector<Suite> suites;
    if (suite_name == "appell" || suite_name == "all") suites.push_back(run_suite_appell(cfg));
    if (suite_name == "transforms" || suite_name == "all")
        suites.push_back(run_suite_transforms(cfg));
    if (suite_name == "operators" || suite_name == "all")
        suites.push_back(run_suite_operators(cfg));
    if (suite_name == "mc" || suite_name == "all") suites.push_back(run_suite_mc(cfg));
    if (suite_name == "bounds" || suite_name == "all") suites.push_back(run_suite_bounds(cfg));
    if (suites.empty()) {
        std::cerr << "unknown suite: " << suite_name << "\n";
        return 2;
    }

    Json out;
    out["beta"] = cfg.beta;
    out["seed"] = cfg.seed;
    int failures = 0;
    bool underpowered = false;
    Json jsuites = Json::array();
    for (const auto& s : suites) {
        Json checks = Json::array();
        for (const auto& c : s.checks) {
            Json jc{{"name", c.name}, {"ref", c.ref}, {"status", c.status},
                    {"lhs", c.lhs},   {"rhs", c.rhs}, {"tol", c.tol}};
            if (c.sigmas >= 0.0) jc["sigmas"] = c.sigmas;
            checks.push_back(jc);
            if (c.status == "underpowered") underpowered = true;
        }
        jsuites.push_back(Json{{"suite", s.name}, {"checks", checks}});
        failures += s.failures();
    }
    out["suites"] = jsuites;
    out["failures"] = failures;
    if (underpowered) out["warning"] = "UNDERPOWERED";
    if (!cfg.deterministic) {
        auto now = std::chrono::system_clock::now().time_since_epoch();
        out["timestamp"] =
            std::chrono::duration_cast<std::chrono::seconds>(now).count();
    }
    write_output(cfg, out.dump(2));
    if (underpowered)
        std::cerr << "warning: sample count too small, statistical checks "
                     "reported as underpowered\n";
    return failures > 0 ? 1 : 0;
}

// ------------------------------------------------------------ symbol-grid

int cmd_symbol_grid(const RunConfig& cfg, const std::string& op_spec, int grid,
                    double radius) {
    Json opj;
    std::ifstream f(op_spec);
    if (f.good())
        f >> opj;
    else
        opj = Json::parse(op_spec);
    OperatorRep op = operator_from_json(opj);
    int d = op.dim();
    MLParams p = cfg.params();
    AppellSystem sys(p, d, std::max(cfg.trunc, 8));
    int N = std::max(cfg.trunc, 8);

    // rays through two fixed unit-ish directions
    std::vector<Cplx> xi0(d, 0.0), eta0(d, 0.0);
    for (int k = 0; k < d; ++k) {
        xi0[k] = Cplx((k % 2 == 0) ? 1.0 : 0.5, 0.0);
        eta0[k] = Cplx((k % 2 == 0) ? 0.5 : 1.0, 0.0);
    }
    double nx = 0.0, ne = 0.0;
    for (int k = 0; k < d; ++k) {
        nx += std::norm(xi0[k]);
        ne += std::norm(eta0[k]);
    }
    for (int k = 0; k < d; ++k) {
        xi0[k] /= std::sqrt(nx);
        eta0[k] /= std::sqrt(ne);
    }

    std::ostringstream csv;
    csv << "beta";
    for (int k = 0; k < d; ++k) csv << ",xi" << k;
    for (int k = 0; k < d; ++k) csv << ",eta" << k;
    csv << ",symbol_re,symbol_im,ihat_re,ihat_im,ratio_re,ratio_im,closed_re,closed_im\n";
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            double u = grid == 1 ? radius : -radius + 2.0 * radius * i / (grid - 1);
            double v = grid == 1 ? radius : -radius + 2.0 * radius * j / (grid - 1);
            std::vector<Cplx> xi(d), eta(d);
            for (int k = 0; k < d; ++k) {
                xi[k] = u * xi0[k];
                eta[k] = v * eta0[k];
            }
            Cplx sym = symbol(sys, op, xi, eta, N);
            Cplx ihat = exp_pairing(p, xi, eta);
            Cplx ratio = sym / ihat;
            auto closed = symbol_closed_form(p, op, xi, eta);
            csv << fmt(p.beta);
            for (int k = 0; k < d; ++k) csv << ',' << fmt(xi[k].real());
            for (int k = 0; k < d; ++k) csv << ',' << fmt(eta[k].real());
            csv << ',' << fmt(sym.real()) << ',' << fmt(sym.imag()) << ','
                << fmt(ihat.real()) << ',' << fmt(ihat.imag()) << ','
                << fmt(ratio.real()) << ',' << fmt(ratio.imag());
            if (closed)
                csv << ',' << fmt(closed->real()) << ',' << fmt(closed->imag());
            else
                csv << ",,";
            csv << '\n';
        }
    }
    write_output(cfg, csv.str());
    return 0;
}

// ----------------------------------------------------------------- mehler

int cmd_mehler(const RunConfig& cfg, const std::string& t_list,
               const std::string& s_list, const std::string& xi_str,
               const std::string& y_str) {
    MLParams p = cfg.params();
    std::vector<double> ts = parse_list(t_list);
    std::vector<double> ss = parse_list(s_list);
    std::vector<double> xi = parse_list(xi_str);
    std::vector<double> y = y_str.empty() ? std::vector<double>(xi.size(), 0.0)
                                          : parse_list(y_str);

    // optional baselines
    Json baseline;
    {
        std::ifstream bf(data_dir() + "/mehler_baseline.json");
        if (bf.good()) bf >> baseline;
    }
    double q = 0.0;
    for (double x : xi) q += x * x;

    std::ostringstream csv;
    csv << "beta,t,s,pt_re,pt_im,defect,baseline_defect\n";
    for (double t : ts) {
        for (double sv : ss) {
            Cplx pt = mehler_exp(p, t, y, xi);
            double defect = mehler_semigroup_defect(p, t, sv, xi);
            std::string base;
            if (baseline.contains("entries")) {
                for (const auto& e : baseline["entries"]) {
                    if (std::fabs(e["beta"].get<double>() - p.beta) < 1e-12 &&
                        std::fabs(e["t"].get<double>() - t) < 1e-12 &&
                        std::fabs(e["s"].get<double>() - sv) < 1e-12 &&
                        std::fabs(e["q"].get<double>() - q) < 1e-9)
                        base = fmt(e["defect"].get<double>());
                }
            }
            csv << fmt(p.beta) << ',' << fmt(t) << ',' << fmt(sv) << ','
                << fmt(pt.real()) << ',' << fmt(pt.imag()) << ',' << fmt(defect)
                << ',' << base << '\n';
        }
    }
    write_output(cfg, csv.str());
    return 0;
}

// ----------------------------------------------------------------- sample

int cmd_sample(const RunConfig& cfg, bool antithetic) {
    MLParams p = cfg.params();
    SampleBatch batch =
        sample_measure(p, cfg.dim, cfg.samples, cfg.seed, antithetic, cfg.threads);
    if (cfg.format == "csv") {
        std::ostringstream csv;
        for (int k = 0; k < cfg.dim; ++k) csv << "omega" << k << ',';
        csv << "tau\n";
        for (std::int64_t i = 0; i < batch.count; ++i) {
            const double* row = batch.row(i);
            for (int k = 0; k < cfg.dim; ++k) csv << fmt(row[k]) << ',';
            csv << fmt(batch.taus[i]) << '\n';
        }
        write_output(cfg, csv.str());
    } else {
        if (cfg.out.empty()) throw InvalidArgument("binary export needs --out");
        std::ofstream f(cfg.out, std::ios::binary);
        std::int64_t hdr[3] = {batch.count, cfg.dim, static_cast<std::int64_t>(cfg.seed)};
        f.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
        f.write(reinterpret_cast<const char*>(batch.omegas.data()),
                static_cast<std::streamsize>(batch.omegas.size() * sizeof(double)));
        f.write(reinterpret_cast<const char*>(batch.taus.data()),
                static_cast<std::streamsize>(batch.taus.size() * sizeof(double)));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mittag-Leffler analysis calculator"};
    app.require_subcommand(1);

    RunConfig cfg;

    auto* ml = app.add_subcommand("ml-eval", "evaluate E_beta, E_{beta,beta}, M_beta on a grid");
    double zmin = -2.0, zmax = 2.0;
    int count = 41;
    add_common(ml, cfg);
    ml->add_option("--zmin", zmin, "grid start");
    ml->add_option("--zmax", zmax, "grid end");
    ml->add_option("--count", count, "grid points (0 = empty table)");

    auto* ver = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    add_common(ver, cfg);
    ver->add_option("--suite", suite, "appell|transforms|operators|mc|bounds|all");

    auto* sg = app.add_subcommand("symbol-grid", "evaluate an operator symbol on a grid");
    std::string op_spec;
    int grid = 5;
    double radius = 0.3;
    add_common(sg, cfg);
    sg->add_option("--op", op_spec, "operator JSON (file path or inline)")->required();
    sg->add_option("--grid", grid, "grid points per axis");
    sg->add_option("--radius", radius, "ray parameter range");

    auto* me = app.add_subcommand("mehler", "Mehler evolution values and semigroup defects");
    std::string t_list = "0,0.5,1", s_list = "0,0.5,1", xi_str = "1", y_str;
    add_common(me, cfg);
    me->add_option("--t-list", t_list, "comma separated t values");
    me->add_option("--s-list", s_list, "comma separated s values");
    me->add_option("--xi", xi_str, "direction xi, comma separated");
    me->add_option("--y", y_str, "base point y, comma separated (default 0)");

    auto* sa = app.add_subcommand("sample", "draw a mu_beta sample batch and export it");
    bool antithetic = false;
    add_common(sa, cfg);
    sa->add_flag("--antithetic", antithetic, "antithetic pairing of the Gaussian factor");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ml->parsed()) return cmd_ml_eval(cfg, zmin, zmax, count);
        if (ver->parsed()) return cmd_verify(cfg, suite);
        if (sg->parsed()) return cmd_symbol_grid(cfg, op_spec, grid, radius);
        if (me->parsed()) return cmd_mehler(cfg, t_list, s_list, xi_str, y_str);
        if (sa->parsed()) return cmd_sample(cfg, antithetic);
    } catch (const NonConvergent& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const OutsideDomain& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
