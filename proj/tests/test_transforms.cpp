#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mlcalc/measure_mc.hpp"
#include "mlcalc/rng.hpp"
#include "mlcalc/transforms.hpp"

using namespace mlcalc;

namespace {

MLParams params_for(double beta) {
    MLParams p;
    p.beta = beta;
    return p;
}

std::vector<Cplx> random_vec(int d, std::uint64_t seed, std::uint64_t stream,
                             double scale = 1.0) {
    std::vector<Cplx> v(d);
    for (int k = 0; k < d; ++k)
        v[k] = Cplx(scale * (2.0 * rng::uniform(seed, stream, k) - 1.0), 0.0);
    return v;
}

ChaosVector pure_qn(const MLParams& p, int d, int n, std::uint64_t seed,
                    std::uint64_t stream) {
    ChaosVector v(p, d, Role::Distribution, Basis::AppellP, n);
    std::uint64_t draw = 0;
    for (const auto& mi : all_multisets(d, n))
        v.kernel(n).set(mi, Cplx(2.0 * rng::uniform(seed, stream, draw++) - 1.0, 0.0));
    return v;
}

} // namespace

TEST_CASE("exp_vector structure") {
    MLParams p = params_for(0.5);
    AppellSystem sys(p, 2, 8);

    ExpVector z = exp_vector(sys, {Cplx(0.0), Cplx(0.0)}, 8);
    CHECK(z.body.kernel(0).scalar_value() == Cplx(1.0, 0.0));
    for (int n = 1; n <= 8; ++n) CHECK(z.body.kernel(n).is_zero());

    auto xi = random_vec(2, 141, 0, 0.4);
    ExpVector ev = exp_vector(sys, xi, 8);
    SymTensor want = Cplx(0.5) * SymTensor::vector_power(xi, 2);
    CHECK(approx_equal(ev.body.kernel(2), want, 1e-16));
}

TEST_CASE("exp_vector pointwise against the scalar closed form") {
    MLParams p = params_for(0.5);
    int d = 2;
    AppellSystem sys(p, d, 20);
    for (int t = 0; t < 10; ++t) {
        auto xi = random_vec(d, 149, t, 0.5 / std::sqrt(double(d)));
        auto om = random_vec(d, 151, t, 2.0 / std::sqrt(double(d)));
        ExpVector ev = exp_vector(sys, xi, 20);
        Cplx got = sys.evaluate(ev.body, om);
        Cplx want = std::exp(bilinear(om, xi)) / mittag_leffler(p, 0.5 * bilinear_self(xi));
        CHECK(std::abs(got - want) <= 1e-8);
    }
}

TEST_CASE("exp_vector domain check") {
    MLParams p = params_for(0.5);
    AppellSystem sys(p, 2, 6);
    std::vector<Cplx> huge{Cplx(9.0, 0.0), Cplx(9.0, 0.0)};
    CHECK_THROWS_AS(exp_vector(sys, huge, 6), OutsideDomain);
    CHECK(positivity_radius(p) > 1.0);
}

TEST_CASE("s_transform collapses pure Q_n to its kernel pairing") {
    MLParams p = params_for(0.5);
    AppellSystem sys(p, 2, 8);

    // constants
    ChaosVector q0(p, 2, Role::Distribution, Basis::AppellP, 0);
    q0.kernel(0).set({}, Cplx(3.25, 0.5));
    for (int t = 0; t < 3; ++t) {
        auto xi = random_vec(2, 157, t, 0.4);
        CHECK(s_transform(sys, q0, xi) == Cplx(3.25, 0.5));
    }

    // linear
    auto y = random_vec(2, 163, 0);
    ChaosVector q1(p, 2, Role::Distribution, Basis::AppellP, 1);
    q1.kernel(1) = SymTensor::vector(y);
    auto xi = random_vec(2, 167, 0, 0.4);
    CHECK(std::abs(s_transform(sys, q1, xi) - bilinear(y, xi)) < 1e-15);

    // general degree
    for (int n = 2; n <= 4; ++n) {
        ChaosVector qn = pure_qn(p, 2, n, 173, n);
        auto x2 = random_vec(2, 179, n, 0.4);
        Cplx want = pairing(qn.kernel(n), SymTensor::vector_power(x2, n));
        CHECK(std::abs(s_transform(sys, qn, x2) - want) < 1e-14);
    }
}

TEST_CASE("s_transform at zero returns the constant kernel") {
    MLParams p = params_for(0.75);
    AppellSystem sys(p, 3, 6);
    ChaosVector Phi = pure_qn(p, 3, 3, 181, 0);
    Phi.resize_degree(3);
    Phi.kernel(0).set({}, Cplx(-1.5, 0.25));
    CHECK(s_transform(sys, Phi, std::vector<Cplx>(3, 0.0)) == Cplx(-1.5, 0.25));
}

TEST_CASE("t_transform") {
    MLParams p = params_for(0.5);
    AppellSystem sys(p, 2, 8);
    ChaosVector q0(p, 2, Role::Distribution, Basis::AppellP, 0);
    q0.kernel(0).set({}, 1.0);

    for (int t = 0; t < 5; ++t) {
        auto phi = random_vec(2, 191, t, 0.8);
        Cplx got = t_transform(sys, q0, phi);
        Cplx want = mittag_leffler(p, -0.5 * bilinear_self(phi));
        CHECK(std::abs(got - want) < 1e-13);
    }

    // phi = 0 gives the constant kernel
    ChaosVector Phi = pure_qn(p, 2, 2, 193, 0);
    Phi.kernel(0).set({}, Cplx(0.75, 0.0));
    CHECK(std::abs(t_transform(sys, Phi, std::vector<Cplx>(2, 0.0)) - Cplx(0.75, 0.0)) <
          1e-15);

    // Q_1(y): i <y, phi> E_beta(-<phi,phi>/2)
    auto y = random_vec(2, 197, 0);
    ChaosVector q1(p, 2, Role::Distribution, Basis::AppellP, 1);
    q1.kernel(1) = SymTensor::vector(y);
    auto phi = random_vec(2, 199, 0, 0.6);
    Cplx want = Cplx(0.0, 1.0) * bilinear(y, phi) *
                mittag_leffler(p, -0.5 * bilinear_self(phi));
    CHECK(std::abs(t_transform(sys, q1, phi) - want) < 1e-13);
}

TEST_CASE("exp_pairing closed form") {
    MLParams p1 = params_for(1.0);
    auto xi = random_vec(2, 211, 0, 0.5);
    auto eta = random_vec(2, 223, 0, 0.5);

    // eta = 0 pairs to 1
    CHECK(std::abs(exp_pairing(p1, xi, std::vector<Cplx>(2, 0.0)) - Cplx(1.0)) < 1e-14);

    // Gaussian case: exp(<xi,eta>)
    Cplx want = std::exp(bilinear(xi, eta));
    CHECK(std::abs(exp_pairing(p1, xi, eta) - want) < 1e-13);

    // symmetry
    MLParams p = params_for(0.5);
    CHECK(std::abs(exp_pairing(p, xi, eta) - exp_pairing(p, eta, xi)) < 1e-14);
}

TEST_CASE("s_transform is polynomial along rays (truncated distributions)") {
    MLParams p = params_for(0.5);
    AppellSystem sys(p, 2, 8);
    ChaosVector Phi = pure_qn(p, 2, 4, 227, 0);
    Phi.resize_degree(4);
    std::uint64_t draw = 0;
    for (int n = 0; n <= 3; ++n)
        for (const auto& mi : all_multisets(2, n))
            Phi.kernel(n).set(mi, Cplx(2.0 * rng::uniform(229, n, draw++) - 1.0, 0.0));

    auto xi1 = random_vec(2, 233, 0, 0.1);
    auto xi2 = random_vec(2, 239, 0, 0.1);
    int deg = 4;
    std::vector<double> nodes(deg + 1);
    std::vector<Cplx> vals(deg + 1);
    for (int i = 0; i <= deg; ++i) {
        nodes[i] = -0.5 + 1.0 * i / deg;
        std::vector<Cplx> xi(2);
        for (int k = 0; k < 2; ++k) xi[k] = xi1[k] + nodes[i] * xi2[k];
        vals[i] = s_transform(sys, Phi, xi);
    }
    std::vector<Cplx> coef = vals;
    for (int j = 1; j <= deg; ++j)
        for (int i = deg; i >= j; --i)
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j]);
    for (int t = 0; t < 10; ++t) {
        double lam = -0.48 + 0.096 * t + 0.017;
        std::vector<Cplx> xi(2);
        for (int k = 0; k < 2; ++k) xi[k] = xi1[k] + lam * xi2[k];
        Cplx pred = coef[deg];
        for (int i = deg - 1; i >= 0; --i) pred = pred * (lam - nodes[i]) + coef[i];
        CHECK(std::abs(pred - s_transform(sys, Phi, xi)) < 1e-9);
    }
}

TEST_CASE("exp_pairing agrees with the truncated L2 pairing") {
    MLParams p = params_for(0.5);
    int d = 2;
    AppellSystem sys(p, d, 12);
    for (int t = 0; t < 5; ++t) {
        auto xi = random_vec(d, 241, t, 0.4 / std::sqrt(double(d)));
        auto eta = random_vec(d, 251, t, 0.4 / std::sqrt(double(d)));
        Cplx closed = exp_pairing(p, xi, eta);
        ExpVector a = exp_vector(sys, xi, 12), b = exp_vector(sys, eta, 12);
        CHECK(std::abs(closed - sys.l2_pairing_bilinear(a.body, b.body)) < 1e-8);
    }
}

TEST_CASE("t_transform of Q_0(1) tracks the MC characteristic function") {
    MLParams p = params_for(0.5);
    int d = 2;
    AppellSystem sys(p, d, 6);
    ChaosVector q0(p, d, Role::Distribution, Basis::AppellP, 0);
    q0.kernel(0).set({}, 1.0);
    SampleBatch batch = sample_measure(p, d, 400000, 90210);
    for (int t = 0; t < 20; ++t) {
        std::vector<Cplx> phi = random_vec(d, 881, t, 1.2);
        std::vector<double> phir(d);
        for (int k = 0; k < d; ++k) phir[k] = phi[k].real();
        MCEstimate cf = mc_char_function(batch, phir);
        Cplx ana = t_transform(sys, q0, phi);
        CHECK(cf.sigmas_from(ana) <= 3.0);
    }
}

TEST_CASE("tail bound helper") {
    // sum_{n>N} x^n/n! = e^x - partial
    double x = 0.8;
    int N = 6;
    double partial = 0.0, term = 1.0;
    for (int n = 0; n <= N; ++n) {
        partial += term;
        term *= x / (n + 1);
    }
    CHECK(exp_tail_bound(0.8, 1.0, N) ==
          doctest::Approx(std::exp(x) - partial).epsilon(1e-10));
}
