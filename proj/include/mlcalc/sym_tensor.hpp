#ifndef MLCALC_SYM_TENSOR_HPP
#define MLCALC_SYM_TENSOR_HPP

#include <complex>
#include <map>
#include <vector>

#include "mlcalc/errors.hpp"

namespace mlcalc {

using Cplx = std::complex<double>;

/// Sorted (nondecreasing) multi-index over {0..dim-1}; length = tensor degree.
using MultiIndex = std::vector<int>;

/// Number of distinct permutations of a sorted multi-index
/// (n! / prod of repeat factorials), computed as a product of binomials so the
/// value is exact in a double at the degrees this library handles.
double multiset_multiplicity(const MultiIndex& m);

/// All sorted multi-indices of length n over {0..d-1}, lexicographic order.
std::vector<MultiIndex> all_multisets(int d, int n);

/// Merge two sorted multi-indices.
MultiIndex merge_sorted(const MultiIndex& a, const MultiIndex& b);

/// a minus b as multisets; false if b is not contained in a.
bool multiset_subtract(const MultiIndex& a, const MultiIndex& b, MultiIndex& out);

/// Symmetric tensor of fixed degree over C^dim, stored sparsely by sorted
/// multi-index. The stored coefficient is the value of the fully symmetric
/// dense tensor at any permutation of that index; every pairing below carries
/// the multiplicity factor explicitly.
class SymTensor {
public:
    SymTensor() = default;
    SymTensor(int dim, int degree);

    /// Degree-0 tensor holding a single scalar.
    static SymTensor scalar(int dim, Cplx value);
    /// Degree-1 tensor from a coordinate vector.
    static SymTensor vector(const std::vector<Cplx>& v);
    /// xi^{(x) n}: coefficient at a multiset is the product of components.
    static SymTensor vector_power(const std::vector<Cplx>& v, int n);
    /// Symmetrization of raw (index, value) entries; indices need not be
    /// sorted, repeated indices accumulate.
    static SymTensor from_raw_entries(
        int dim, int degree,
        const std::vector<std::pair<std::vector<int>, Cplx>>& entries);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const std::map<MultiIndex, Cplx>& coeffs() const { return coeffs_; }

    Cplx at(const MultiIndex& idx) const; ///< 0 if absent; idx must be sorted
    void set(const MultiIndex& idx, Cplx v);
    void add(const MultiIndex& idx, Cplx v);

    bool is_zero(double tol = 0.0) const;
    void prune(double tol);
    SymTensor conj() const;

    SymTensor& operator+=(const SymTensor& other);
    SymTensor& operator*=(Cplx s);
    friend SymTensor operator*(Cplx s, SymTensor t) { t *= s; return t; }
    friend SymTensor operator+(SymTensor a, const SymTensor& b) { a += b; return a; }
    friend SymTensor operator-(SymTensor a, const SymTensor& b) {
        a += Cplx(-1.0) * b;
        return a;
    }

    /// Scalar value for degree-0 tensors.
    Cplx scalar_value() const;

private:
    int dim_ = 1;
    int degree_ = 0;
    std::map<MultiIndex, Cplx> coeffs_;
};

/// Idempotent symmetrization of an already-symmetric tensor is the identity;
/// this is the entry point for raw dense-ish data.
SymTensor symmetrize(int dim, int degree,
                     const std::vector<std::pair<std::vector<int>, Cplx>>& entries);

/// Symmetric tensor product a (x)hat b.
SymTensor sym_product(const SymTensor& a, const SymTensor& b);

/// Contract the last deg(b) slots of a against b; full contraction returns a
/// degree-0 tensor equal to the bilinear pairing.
SymTensor contract(const SymTensor& a, const SymTensor& b);

/// Bilinear pairing <a,b> = sum over dense indices (no conjugation).
Cplx pairing(const SymTensor& a, const SymTensor& b);

/// Sesquilinear inner product <a, conj(b)> for L2-style norms.
Cplx inner(const SymTensor& a, const SymTensor& b);

/// Trace tensor Tr with <Tr, theta (x)hat eta> = <theta, eta>.
SymTensor trace_tensor(int d);

/// Weight profile w_k = (k+1)^p of the concrete Hilbert scale; negative p
/// gives the dual weights.
struct WeightProfile {
    int p = 0;
    double weight(int k) const;
};

/// | t |_p with the multiplicity convention:
/// |t|_p^2 = sum_m mult(m) |c_m|^2 prod_i w_{m_i}^2.
double weighted_norm(const SymTensor& t, const WeightProfile& w);

/// Entrywise comparison over the union of stored keys.
bool approx_equal(const SymTensor& a, const SymTensor& b, double tol);
double max_entry_diff(const SymTensor& a, const SymTensor& b);

} // namespace mlcalc

#endif
