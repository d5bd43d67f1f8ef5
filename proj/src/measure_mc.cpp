#include "mlcalc/measure_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include "mlcalc/rng.hpp"

namespace mlcalc {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr std::int64_t kBlock = 1 << 16;

// tau = W^{1-b} sin(th) sin(b th)^{-b} sin((1-b) th)^{-(1-b)}, th = pi U.
double subordinator_draw(double beta, std::uint64_t seed, std::uint64_t sample) {
    double u = rng::uniform(seed, sample, 0);
    double w = -std::log(rng::uniform(seed, sample, 1));
    double th = kPi * u;
    double s1 = std::sin(th);
    double sb = std::sin(beta * th);
    double s1b = std::sin((1.0 - beta) * th);
    return std::pow(w, 1.0 - beta) * s1 * std::pow(sb, -beta) *
           std::pow(s1b, -(1.0 - beta));
}

void fill_sample(const MLParams& params, int d, std::uint64_t seed, bool antithetic,
                 std::int64_t i, double* omega_row, double& tau_out) {
    std::uint64_t stream = antithetic ? static_cast<std::uint64_t>(i / 2)
                                      : static_cast<std::uint64_t>(i);
    double flip = (antithetic && (i % 2 == 1)) ? -1.0 : 1.0;
    double tau = params.beta == 1.0 ? 1.0 : subordinator_draw(params.beta, seed, stream);
    double rt = std::sqrt(tau);
    for (int k = 0; k < d; k += 2) {
        double n0, n1;
        rng::normal_pair(seed, stream, 2 + k, n0, n1);
        omega_row[k] = flip * rt * n0;
        if (k + 1 < d) omega_row[k + 1] = flip * rt * n1;
    }
    tau_out = tau;
}

void parallel_blocks(std::int64_t n, int threads,
                     const std::function<void(std::int64_t, std::int64_t)>& body) {
    std::int64_t nblocks = (n + kBlock - 1) / kBlock;
    if (threads <= 1 || nblocks <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b)
            body(b * kBlock, std::min(n, (b + 1) * kBlock));
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::int64_t b = next.fetch_add(1);
            if (b >= nblocks) break;
            body(b * kBlock, std::min(n, (b + 1) * kBlock));
        }
    };
    std::vector<std::thread> pool;
    int nthread = std::min<std::int64_t>(threads, nblocks);
    pool.reserve(nthread);
    for (int t = 0; t < nthread; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// Deterministic mean/SE reduction: serial long-double sums per fixed-size
// block, blocks combined in index order, so thread count cannot change the
// result.
template <typename F>
MCEstimate reduce_estimate(std::int64_t n, int threads, F&& per_sample) {
    std::int64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<std::complex<long double>> sums(nblocks, {0.0L, 0.0L});
    std::vector<long double> sq(nblocks, 0.0L);
    parallel_blocks(n, threads, [&](std::int64_t lo, std::int64_t hi) {
        std::int64_t b = lo / kBlock;
        std::complex<long double> acc{0.0L, 0.0L};
        long double acc2 = 0.0L;
        for (std::int64_t i = lo; i < hi; ++i) {
            Cplx v = per_sample(i);
            acc += std::complex<long double>(v.real(), v.imag());
            acc2 += static_cast<long double>(std::norm(v));
        }
        sums[b] = acc;
        sq[b] = acc2;
    });
    std::complex<long double> total{0.0L, 0.0L};
    long double total2 = 0.0L;
    for (std::int64_t b = 0; b < nblocks; ++b) {
        total += sums[b];
        total2 += sq[b];
    }
    MCEstimate est;
    est.count = n;
    Cplx mean(static_cast<double>(total.real() / n), static_cast<double>(total.imag() / n));
    est.value = mean;
    long double var = total2 / n - static_cast<long double>(std::norm(mean));
    if (var < 0.0L) var = 0.0L;
    est.std_error = std::sqrt(static_cast<double>(var) / static_cast<double>(n));
    return est;
}

} // namespace

std::vector<double> sample_subordinator(double beta, std::int64_t n, std::uint64_t seed) {
    if (!(beta > 0.0) || beta > 1.0)
        throw BetaOutOfRange("subordinator needs beta in (0,1]");
    std::vector<double> taus(n);
    if (beta == 1.0) {
        std::fill(taus.begin(), taus.end(), 1.0); // nu_1 = delta_1
        return taus;
    }
    for (std::int64_t i = 0; i < n; ++i) taus[i] = subordinator_draw(beta, seed, i);
    return taus;
}

SampleBatch sample_measure(const MLParams& params, int d, std::int64_t n,
                           std::uint64_t seed, bool antithetic, int threads) {
    params.validate();
    if (d < 1) throw InvalidArgument("dimension must be >= 1");
    SampleBatch batch;
    batch.beta = params.beta;
    batch.dim = d;
    batch.count = n;
    batch.seed = seed;
    batch.antithetic = antithetic;
    batch.omegas.resize(static_cast<std::size_t>(n) * d);
    batch.taus.resize(n);
    parallel_blocks(n, threads, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i)
            fill_sample(params, d, seed, antithetic, i, batch.omegas.data() + i * d,
                        batch.taus[i]);
    });
    return batch;
}

CompiledEval::CompiledEval(const AppellSystem& sys, const ChaosVector& f) {
    ChaosVector mono = sys.to_monomial(f);
    for (int n = 0; n <= mono.max_degree(); ++n) {
        for (const auto& [idx, c] : mono.kernel(n).coeffs()) {
            Term t;
            t.c = multiset_multiplicity(idx) * c;
            t.idx.assign(idx.begin(), idx.end());
            terms_.push_back(std::move(t));
        }
    }
}

Cplx CompiledEval::eval(const double* omega, int /*dim*/) const {
    Cplx acc = 0.0;
    for (const auto& t : terms_) {
        double w = 1.0;
        for (int k : t.idx) w *= omega[k];
        acc += t.c * w;
    }
    return acc;
}

MCEstimate mc_pair(const AppellSystem& sys, const SampleBatch& batch,
                   const ChaosVector& f, const ChaosVector& g, int threads) {
    CompiledEval ef(sys, f);
    CompiledEval eg(sys, g);
    return reduce_estimate(batch.count, threads, [&](std::int64_t i) {
        const double* w = batch.row(i);
        return ef.eval(w, batch.dim) * std::conj(eg.eval(w, batch.dim));
    });
}

MCEstimate mc_covariance_pair(const SampleBatch& batch, const std::vector<double>& phi,
                              const std::vector<double>& psi) {
    if (static_cast<int>(phi.size()) != batch.dim ||
        static_cast<int>(psi.size()) != batch.dim)
        throw DimMismatch("covariance vectors must match batch dim");
    return reduce_estimate(batch.count, 1, [&](std::int64_t i) {
        const double* w = batch.row(i);
        double a = 0.0, b = 0.0;
        for (int k = 0; k < batch.dim; ++k) {
            a += w[k] * phi[k];
            b += w[k] * psi[k];
        }
        return Cplx(a * b, 0.0);
    });
}

MCEstimate mc_moment(const SampleBatch& batch, const std::vector<double>& phi,
                     int power) {
    if (static_cast<int>(phi.size()) != batch.dim)
        throw DimMismatch("moment vector must match batch dim");
    return reduce_estimate(batch.count, 1, [&](std::int64_t i) {
        const double* w = batch.row(i);
        double a = 0.0;
        for (int k = 0; k < batch.dim; ++k) a += w[k] * phi[k];
        double v = 1.0;
        for (int p = 0; p < power; ++p) v *= a;
        return Cplx(v, 0.0);
    });
}

MCEstimate mc_char_function(const SampleBatch& batch, const std::vector<double>& phi) {
    if (static_cast<int>(phi.size()) != batch.dim)
        throw DimMismatch("char-function vector must match batch dim");
    return reduce_estimate(batch.count, 1, [&](std::int64_t i) {
        const double* w = batch.row(i);
        double a = 0.0;
        for (int k = 0; k < batch.dim; ++k) a += w[k] * phi[k];
        return Cplx(std::cos(a), std::sin(a));
    });
}

MCEstimate mc_laplace(const std::vector<double>& taus, double s) {
    return reduce_estimate(static_cast<std::int64_t>(taus.size()), 1,
                           [&](std::int64_t i) {
                               return Cplx(std::exp(-s * taus[i]), 0.0);
                           });
}

MCEstimate mc_mehler(const SampleBatch& batch, double t, const std::vector<double>& y,
                     const std::vector<double>& xi) {
    if (static_cast<int>(xi.size()) != batch.dim)
        throw DimMismatch("mehler vector must match batch dim");
    double decay = std::exp(-t);
    double spread = std::sqrt(1.0 - decay * decay);
    double phase0 = 0.0;
    for (int k = 0; k < batch.dim; ++k) phase0 += decay * y[k] * xi[k];
    return reduce_estimate(batch.count, 1, [&](std::int64_t i) {
        const double* w = batch.row(i);
        double a = phase0;
        for (int k = 0; k < batch.dim; ++k) a += spread * w[k] * xi[k];
        return Cplx(std::cos(a), std::sin(a));
    });
}

std::vector<double> density_histogram(const std::vector<double>& taus, double lo,
                                      double hi, int bins) {
    std::vector<double> dens(bins, 0.0);
    double width = (hi - lo) / bins;
    for (double t : taus) {
        if (t < lo || t >= hi) continue;
        int b = static_cast<int>((t - lo) / width);
        if (b >= 0 && b < bins) dens[b] += 1.0;
    }
    double norm = 1.0 / (static_cast<double>(taus.size()) * width);
    for (auto& d : dens) d *= norm;
    return dens;
}

} // namespace mlcalc
