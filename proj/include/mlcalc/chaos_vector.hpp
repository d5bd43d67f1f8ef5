#ifndef MLCALC_CHAOS_VECTOR_HPP
#define MLCALC_CHAOS_VECTOR_HPP

#include <vector>

#include "mlcalc/params.hpp"
#include "mlcalc/sym_tensor.hpp"

namespace mlcalc {

/// Which expansion the kernel sequence belongs to. Test functions live in the
/// P-system (or its monomial re-expression); distributions carry Q-system
/// kernels and are only ever paired, never evaluated pointwise.
enum class Role { TestFunction, Distribution };

/// Kernel basis for test functions.
enum class Basis { AppellP, Monomial };

/// Finite kernel sequence: kernels[n] has degree n. Represents
///   test function  phi(w) = sum_n < P_n(w), kernels[n] >   (AppellP basis)
///                  phi(w) = sum_n < w^{(x)n}, kernels[n] >  (Monomial basis)
///   distribution   Phi    = sum_n Q_n(kernels[n]).
class ChaosVector {
public:
    ChaosVector() = default;
    ChaosVector(MLParams params, int dim, Role role, Basis basis, int max_degree)
        : params_(params), dim_(dim), role_(role), basis_(basis) {
        kernels_.reserve(max_degree + 1);
        for (int n = 0; n <= max_degree; ++n) kernels_.emplace_back(dim, n);
    }

    const MLParams& params() const { return params_; }
    int dim() const { return dim_; }
    Role role() const { return role_; }
    Basis basis() const { return basis_; }
    void set_role(Role r) { role_ = r; }
    void set_basis(Basis b) { basis_ = b; }

    int max_degree() const { return static_cast<int>(kernels_.size()) - 1; }

    const SymTensor& kernel(int n) const { return kernels_.at(n); }
    SymTensor& kernel(int n) { return kernels_.at(n); }
    const std::vector<SymTensor>& kernels() const { return kernels_; }

    /// Extend (zero-padded) or shrink the kernel sequence.
    void resize_degree(int new_max) {
        while (static_cast<int>(kernels_.size()) > new_max + 1) kernels_.pop_back();
        for (int n = static_cast<int>(kernels_.size()); n <= new_max; ++n)
            kernels_.emplace_back(dim_, n);
    }

    /// Highest degree with a nonzero kernel, -1 if all vanish.
    int top_degree(double tol = 0.0) const {
        for (int n = max_degree(); n >= 0; --n)
            if (!kernels_[n].is_zero(tol)) return n;
        return -1;
    }

    bool compatible_with(const ChaosVector& other) const {
        return dim_ == other.dim_ && params_.beta == other.params_.beta;
    }

    ChaosVector& operator+=(const ChaosVector& other);
    ChaosVector& operator*=(Cplx s);
    friend ChaosVector operator*(Cplx s, ChaosVector v) { v *= s; return v; }
    friend ChaosVector operator+(ChaosVector a, const ChaosVector& b) {
        a += b;
        return a;
    }

private:
    MLParams params_;
    int dim_ = 1;
    Role role_ = Role::TestFunction;
    Basis basis_ = Basis::AppellP;
    std::vector<SymTensor> kernels_;
};

/// Kondratiev-type test norm: sqrt( sum (n!)^2 2^{nq} |phi^{(n)}|_p^2 ).
double test_norm(const ChaosVector& v, int p, int q);

/// Distribution norm: sqrt( sum 2^{-nq} |Phi^{(n)}|_{-p}^2 ).
double distribution_norm(const ChaosVector& v, int p, int q);

} // namespace mlcalc

#endif
