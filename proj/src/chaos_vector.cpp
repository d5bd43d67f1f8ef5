#include "mlcalc/chaos_vector.hpp"

#include <cmath>

namespace mlcalc {

ChaosVector& ChaosVector::operator+=(const ChaosVector& other) {
    if (!compatible_with(other)) throw DimMismatch("chaos vector sum incompatible");
    if (other.role_ != role_ || other.basis_ != basis_)
        throw BasisMismatch("chaos vector sum mixes roles or bases");
    if (other.max_degree() > max_degree()) resize_degree(other.max_degree());
    for (int n = 0; n <= other.max_degree(); ++n) kernels_[n] += other.kernels_[n];
    return *this;
}

ChaosVector& ChaosVector::operator*=(Cplx s) {
    for (auto& k : kernels_) k *= s;
    return *this;
}

double test_norm(const ChaosVector& v, int p, int q) {
    WeightProfile wp{p};
    double acc = 0.0;
    double fact = 1.0;
    for (int n = 0; n <= v.max_degree(); ++n) {
        if (n > 0) fact *= n;
        double norm_p = weighted_norm(v.kernel(n), wp);
        acc += fact * fact * std::pow(2.0, n * q) * norm_p * norm_p;
    }
    return std::sqrt(acc);
}

double distribution_norm(const ChaosVector& v, int p, int q) {
    WeightProfile wm{-p};
    double acc = 0.0;
    for (int n = 0; n <= v.max_degree(); ++n) {
        double norm_m = weighted_norm(v.kernel(n), wm);
        acc += std::pow(2.0, -n * q) * norm_m * norm_m;
    }
    return std::sqrt(acc);
}

} // namespace mlcalc
