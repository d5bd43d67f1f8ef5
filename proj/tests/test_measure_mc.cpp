#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

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

// quadrature oracle for E[tau] = int tau M_beta(tau) dtau; T = 10 leaves a
// tail below 1e-10 for beta = 1/2
double mean_tau_quadrature(double beta) {
    MLParams p = params_for(beta);
    double acc = 0.0;
    int n = 4000;
    double T = 10.0;
    double h = T / n;
    for (int i = 0; i < n; ++i) {
        double mid = (i + 0.5) * h;
        acc += mid * m_wright(p, mid) * h;
    }
    return acc;
}

} // namespace

TEST_CASE("subordinator: degenerate beta = 1") {
    auto taus = sample_subordinator(1.0, 100, 9);
    for (double t : taus) CHECK(t == 1.0);
    CHECK_THROWS_AS(sample_subordinator(1.5, 10, 9), BetaOutOfRange);
}

TEST_CASE("subordinator mean matches the density quadrature") {
    double beta = 0.5;
    auto taus = sample_subordinator(beta, 400000, 20240817);
    double mean = 0.0;
    for (double t : taus) mean += t;
    mean /= taus.size();
    double want = mean_tau_quadrature(beta); // = 1/Gamma(beta+1) analytically
    CHECK(std::fabs(want - 1.0 / std::tgamma(beta + 1.0)) < 1e-6);
    double sd = 0.0;
    for (double t : taus) sd += (t - mean) * (t - mean);
    sd = std::sqrt(sd / taus.size() / taus.size());
    CHECK(std::fabs(mean - want) <= 4.0 * sd);
}

TEST_CASE("subordinator empirical Laplace transform hits E_beta(-s)") {
    for (double beta : {0.25, 0.5, 0.75}) {
        MLParams p = params_for(beta);
        auto taus = sample_subordinator(beta, 1000000, 77);
        for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
            MCEstimate est = mc_laplace(taus, s);
            Cplx ana = mittag_leffler(p, Cplx(-s, 0.0));
            CHECK(est.sigmas_from(ana) <= 4.0);
        }
    }
}

TEST_CASE("sample_measure reproducibility is bit exact across thread counts") {
    MLParams p = params_for(0.6);
    SampleBatch a = sample_measure(p, 3, 50000, 4242, false, 1);
    SampleBatch b = sample_measure(p, 3, 50000, 4242, false, 4);
    REQUIRE(a.omegas.size() == b.omegas.size());
    CHECK(std::memcmp(a.omegas.data(), b.omegas.data(),
                      a.omegas.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.taus.data(), b.taus.data(), a.taus.size() * sizeof(double)) ==
          0);
    SampleBatch c = sample_measure(p, 3, 50000, 4243, false, 1);
    CHECK(std::memcmp(a.omegas.data(), c.omegas.data(),
                      a.omegas.size() * sizeof(double)) != 0);
}

TEST_CASE("gaussian limit: beta = 1 covariance is the identity") {
    MLParams p = params_for(1.0);
    SampleBatch batch = sample_measure(p, 2, 200000, 99);
    std::vector<double> e0{1.0, 0.0}, e1{0.0, 1.0};
    MCEstimate v0 = mc_covariance_pair(batch, e0, e0);
    MCEstimate v1 = mc_covariance_pair(batch, e1, e1);
    MCEstimate cr = mc_covariance_pair(batch, e0, e1);
    CHECK(v0.sigmas_from(Cplx(1.0, 0.0)) <= 4.0);
    CHECK(v1.sigmas_from(Cplx(1.0, 0.0)) <= 4.0);
    CHECK(cr.sigmas_from(Cplx(0.0, 0.0)) <= 4.0);
}

TEST_CASE("moments of <omega, phi>") {
    std::vector<double> phi{0.8, -0.5};
    double phi2 = 0.8 * 0.8 + 0.5 * 0.5;
    for (double beta : {0.5, 0.75, 1.0}) {
        MLParams p = params_for(beta);
        SampleBatch batch = sample_measure(p, 2, 400000, 31337);
        MCEstimate odd = mc_moment(batch, phi, 3);
        CHECK(odd.sigmas_from(Cplx(0.0, 0.0)) <= 4.0);
        MCEstimate m2 = mc_moment(batch, phi, 2);
        CHECK(m2.sigmas_from(Cplx(phi2 * gamma_reciprocal(beta + 1.0), 0.0)) <= 4.0);
        MCEstimate m4 = mc_moment(batch, phi, 4);
        CHECK(m4.sigmas_from(Cplx(6.0 * phi2 * phi2 * gamma_reciprocal(2.0 * beta + 1.0),
                                  0.0)) <= 4.0);
    }
}

TEST_CASE("characteristic function matches E_beta(-<phi,phi>/2)") {
    MLParams p = params_for(0.5);
    SampleBatch batch = sample_measure(p, 3, 300000, 555);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> phi(3);
        double norm2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            phi[k] = 2.0 * rng::uniform(601, t, k) - 1.0;
            norm2 += phi[k] * phi[k];
        }
        MCEstimate cf = mc_char_function(batch, phi);
        Cplx ana = mittag_leffler(p, Cplx(-0.5 * norm2, 0.0));
        CHECK(cf.sigmas_from(ana) <= 4.0);
    }
}

TEST_CASE("mc_pair against l2_pairing and exp_pairing") {
    MLParams p = params_for(0.5);
    int d = 2;
    AppellSystem sys(p, d, 10);
    SampleBatch batch = sample_measure(p, d, 400000, 2024);

    // f = g = 1
    ChaosVector one(p, d, Role::TestFunction, Basis::AppellP, 0);
    one.kernel(0).set({}, 1.0);
    MCEstimate unit = mc_pair(sys, batch, one, one);
    CHECK(unit.value.real() == doctest::Approx(1.0));
    CHECK(unit.std_error == doctest::Approx(0.0));

    // f = <P_2, a>, g = 1: mean zero
    ChaosVector p2(p, d, Role::TestFunction, Basis::AppellP, 2);
    p2.kernel(2).set({0, 0}, 0.7);
    p2.kernel(2).set({0, 1}, -0.4);
    p2.kernel(2).set({1, 1}, 0.2);
    MCEstimate zero = mc_pair(sys, batch, p2, one);
    CHECK(zero.sigmas_from(Cplx(0.0, 0.0)) <= 4.0);

    // random low-degree pair: MC vs analytic l2_pairing
    ChaosVector f(p, d, Role::TestFunction, Basis::AppellP, 2);
    f.kernel(0).set({}, 0.3);
    f.kernel(1).set({0}, -0.8);
    f.kernel(2).set({1, 1}, 0.5);
    MCEstimate fg = mc_pair(sys, batch, f, f);
    CHECK(fg.sigmas_from(sys.l2_pairing(f, f)) <= 4.0);

    // truncated exponentials against the closed form
    std::vector<Cplx> xi{Cplx(0.4, 0.0), Cplx(0.0, 0.0)};
    ExpVector ev = exp_vector(sys, xi, 10);
    MCEstimate ee = mc_pair(sys, batch, ev.body, ev.body);
    Cplx ana = exp_pairing(p, xi, xi);
    CHECK(ee.sigmas_from(ana) <= 4.0);
}

TEST_CASE("antithetic batches keep the even moments and kill odd ones pairwise") {
    MLParams p = params_for(0.5);
    SampleBatch batch = sample_measure(p, 2, 100000, 777, true);
    std::vector<double> phi{1.0, 0.5};
    // antithetic pairs cancel odd contributions exactly
    MCEstimate odd = mc_moment(batch, phi, 3);
    CHECK(std::fabs(odd.value.real()) < 1e-12);
    MCEstimate m2 = mc_moment(batch, phi, 2);
    double phi2 = 1.0 + 0.25;
    CHECK(m2.sigmas_from(Cplx(phi2 * gamma_reciprocal(p.beta + 1.0), 0.0)) <= 4.0);
}

TEST_CASE("density histogram tracks M_beta") {
    MLParams p = params_for(0.5);
    auto taus = sample_subordinator(p.beta, 1000000, 31415);
    int bins = 50;
    auto dens = density_histogram(taus, 0.0, 3.0, bins);
    double sup = 0.0;
    for (int b = 0; b < bins; ++b) {
        double mid = (b + 0.5) * 3.0 / bins;
        sup = std::max(sup, std::fabs(dens[b] - m_wright(p, mid)));
    }
    CHECK(sup <= 0.01);
}
