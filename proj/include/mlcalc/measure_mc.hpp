#ifndef MLCALC_MEASURE_MC_HPP
#define MLCALC_MEASURE_MC_HPP

#include <cstdint>
#include <vector>

#include "mlcalc/appell.hpp"

namespace mlcalc {

/// Seeded draws from mu_beta in R^d via subordination: omega_i = sqrt(tau_i) g_i
/// with g_i standard normal and tau_i from the M_beta density. Bit-exact
/// reproducible from (seed, n, d, beta) independent of worker count.
struct SampleBatch {
    double beta = 0.5;
    int dim = 1;
    std::int64_t count = 0;
    std::uint64_t seed = 0;
    bool antithetic = false;
    std::vector<double> omegas; ///< row-major n x d
    std::vector<double> taus;

    const double* row(std::int64_t i) const { return omegas.data() + i * dim; }
};

struct MCEstimate {
    Cplx value{0.0, 0.0};
    double std_error = 0.0;
    std::int64_t count = 0;

    double sigmas_from(Cplx analytic) const {
        double d = std::abs(value - analytic);
        return std_error > 0.0 ? d / std_error : (d == 0.0 ? 0.0 : 1e308);
    }
};

/// tau = S^{-beta} with S one-sided beta-stable (Laplace transform e^{-s^beta});
/// Kanter's representation drives the draws. The empirical Laplace transform
/// matches E_beta(-s). beta = 1 yields the constant-1 stream (nu_1 = delta_1).
std::vector<double> sample_subordinator(double beta, std::int64_t n, std::uint64_t seed);

SampleBatch sample_measure(const MLParams& params, int d, std::int64_t n,
                           std::uint64_t seed, bool antithetic = false,
                           int threads = 1);

/// Test-function evaluator compiled to flat monomial terms for the MC loop.
class CompiledEval {
public:
    CompiledEval(const AppellSystem& sys, const ChaosVector& f);
    Cplx eval(const double* omega, int dim) const;

private:
    struct Term {
        Cplx c; // includes the multiplicity factor
        std::vector<int> idx;
    };
    std::vector<Term> terms_;
};

/// Mean of f(omega) * conj(g(omega)) with standard error; the MC counterpart
/// of l2_pairing.
MCEstimate mc_pair(const AppellSystem& sys, const SampleBatch& batch,
                   const ChaosVector& f, const ChaosVector& g, int threads = 1);

/// Mean of <omega,phi><omega,psi>; analytic value <phi,psi>/Gamma(beta+1).
MCEstimate mc_covariance_pair(const SampleBatch& batch,
                              const std::vector<double>& phi,
                              const std::vector<double>& psi);

/// Mean of <omega,phi>^power.
MCEstimate mc_moment(const SampleBatch& batch, const std::vector<double>& phi,
                     int power);

/// Mean of e^{i <omega, phi>}; analytic value E_beta(-<phi,phi>/2).
MCEstimate mc_char_function(const SampleBatch& batch, const std::vector<double>& phi);

/// Mean of e^{-s tau} over a subordinator stream.
MCEstimate mc_laplace(const std::vector<double>& taus, double s);

/// Mean of e^{i<e^{-t} y + sqrt(1-e^{-2t}) omega, xi>}.
MCEstimate mc_mehler(const SampleBatch& batch, double t, const std::vector<double>& y,
                     const std::vector<double>& xi);

/// Box-kernel density estimate of the subordinator law on [lo, hi).
std::vector<double> density_histogram(const std::vector<double>& taus, double lo,
                                      double hi, int bins);

} // namespace mlcalc

#endif
