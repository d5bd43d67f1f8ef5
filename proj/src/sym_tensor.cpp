#include "mlcalc/sym_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlcalc {

double multiset_multiplicity(const MultiIndex& m) {
    // n! / (k_1! k_2! ...) as a product of binomials C(s_i, k_i) over the
    // runs of equal indices, s_i = running total.
    double mult = 1.0;
    std::size_t i = 0;
    int used = 0;
    while (i < m.size()) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        int run = static_cast<int>(j - i);
        for (int r = 1; r <= run; ++r) {
            ++used;
            mult = mult * used / r;
        }
        i = j;
    }
    return std::round(mult);
}

std::vector<MultiIndex> all_multisets(int d, int n) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    if (n == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        out.push_back(cur);
        int pos = n - 1;
        while (pos >= 0 && cur[pos] == d - 1) --pos;
        if (pos < 0) break;
        int v = cur[pos] + 1;
        for (int k = pos; k < n; ++k) cur[k] = v;
    }
    return out;
}

MultiIndex merge_sorted(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool multiset_subtract(const MultiIndex& a, const MultiIndex& b, MultiIndex& out) {
    out.clear();
    out.reserve(a.size() - b.size());
    std::size_t ib = 0;
    for (std::size_t ia = 0; ia < a.size(); ++ia) {
        if (ib < b.size() && a[ia] == b[ib]) {
            ++ib;
        } else if (ib < b.size() && a[ia] > b[ib]) {
            return false; // b has an element a lacks
        } else {
            out.push_back(a[ia]);
        }
    }
    return ib == b.size();
}

SymTensor::SymTensor(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1) throw InvalidArgument("tensor dim must be >= 1");
    if (degree < 0) throw InvalidArgument("tensor degree must be >= 0");
}

SymTensor SymTensor::scalar(int dim, Cplx value) {
    SymTensor t(dim, 0);
    if (value != Cplx(0.0)) t.coeffs_[{}] = value;
    return t;
}

SymTensor SymTensor::vector(const std::vector<Cplx>& v) {
    SymTensor t(static_cast<int>(v.size()), 1);
    for (int k = 0; k < static_cast<int>(v.size()); ++k)
        if (v[k] != Cplx(0.0)) t.coeffs_[{k}] = v[k];
    return t;
}

SymTensor SymTensor::vector_power(const std::vector<Cplx>& v, int n) {
    int d = static_cast<int>(v.size());
    SymTensor t(d, n);
    if (n == 0) return scalar(d, 1.0);
    for (const auto& m : all_multisets(d, n)) {
        Cplx c = 1.0;
        for (int k : m) c *= v[k];
        if (c != Cplx(0.0)) t.coeffs_[m] = c;
    }
    return t;
}

SymTensor SymTensor::from_raw_entries(
    int dim, int degree,
    const std::vector<std::pair<std::vector<int>, Cplx>>& entries) {
    SymTensor t(dim, degree);
    for (const auto& [idx, v] : entries) {
        if (static_cast<int>(idx.size()) != degree)
            throw DegreeMismatch("raw entry length does not match degree");
        MultiIndex key = idx;
        std::sort(key.begin(), key.end());
        if (!key.empty() && (key.front() < 0 || key.back() >= dim))
            throw DimMismatch("raw entry index out of range");
        t.coeffs_[key] += v;
    }
    // averaging over permutations: each sorted class collects its
    // arrangements, the symmetric value is the mean over all of them
    for (auto& [key, v] : t.coeffs_) v /= multiset_multiplicity(key);
    return t;
}

Cplx SymTensor::at(const MultiIndex& idx) const {
    auto it = coeffs_.find(idx);
    return it == coeffs_.end() ? Cplx(0.0) : it->second;
}

void SymTensor::set(const MultiIndex& idx, Cplx v) {
    if (static_cast<int>(idx.size()) != degree_)
        throw DegreeMismatch("index length does not match degree");
    if (!std::is_sorted(idx.begin(), idx.end()))
        throw InvalidArgument("multi-index must be sorted");
    if (v == Cplx(0.0))
        coeffs_.erase(idx);
    else
        coeffs_[idx] = v;
}

void SymTensor::add(const MultiIndex& idx, Cplx v) { set(idx, at(idx) + v); }

bool SymTensor::is_zero(double tol) const {
    for (const auto& [k, v] : coeffs_)
        if (std::abs(v) > tol) return false;
    return true;
}

void SymTensor::prune(double tol) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (std::abs(it->second) <= tol)
            it = coeffs_.erase(it);
        else
            ++it;
    }
}

SymTensor SymTensor::conj() const {
    SymTensor t(dim_, degree_);
    for (const auto& [k, v] : coeffs_) t.coeffs_[k] = std::conj(v);
    return t;
}

SymTensor& SymTensor::operator+=(const SymTensor& other) {
    if (other.dim_ != dim_) throw DimMismatch("tensor sum dims differ");
    if (other.degree_ != degree_) throw DegreeMismatch("tensor sum degrees differ");
    for (const auto& [k, v] : other.coeffs_) {
        auto [it, inserted] = coeffs_.try_emplace(k, v);
        if (!inserted) it->second += v;
    }
    return *this;
}

SymTensor& SymTensor::operator*=(Cplx s) {
    if (s == Cplx(0.0)) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [k, v] : coeffs_) v *= s;
    return *this;
}

Cplx SymTensor::scalar_value() const {
    if (degree_ != 0) throw DegreeMismatch("scalar_value on nonzero degree");
    return at({});
}

SymTensor symmetrize(int dim, int degree,
                     const std::vector<std::pair<std::vector<int>, Cplx>>& entries) {
    return SymTensor::from_raw_entries(dim, degree, entries);
}

SymTensor sym_product(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim()) throw DimMismatch("sym_product dims differ");
    SymTensor out(a.dim(), a.degree() + b.degree());
    for (const auto& [ka, va] : a.coeffs()) {
        double ma = multiset_multiplicity(ka);
        for (const auto& [kb, vb] : b.coeffs()) {
            MultiIndex m = merge_sorted(ka, kb);
            out.add(m, ma * multiset_multiplicity(kb) * va * vb);
        }
    }
    // divide out the merged multiplicity: the symmetrized dense value at a
    // class is the multiplicity-weighted average over the splits
    SymTensor res(out.dim(), out.degree());
    for (const auto& [k, v] : out.coeffs())
        res.set(k, v / multiset_multiplicity(k));
    return res;
}

SymTensor contract(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim()) throw DimMismatch("contract dims differ");
    if (a.degree() < b.degree())
        throw DegreeMismatch("contract requires deg(a) >= deg(b)");
    SymTensor out(a.dim(), a.degree() - b.degree());
    MultiIndex rest;
    for (const auto& [ka, va] : a.coeffs()) {
        for (const auto& [kb, vb] : b.coeffs()) {
            if (!multiset_subtract(ka, kb, rest)) continue;
            out.add(rest, multiset_multiplicity(kb) * va * vb);
        }
    }
    return out;
}

Cplx pairing(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim()) throw DimMismatch("pairing dims differ");
    if (a.degree() != b.degree()) throw DegreeMismatch("pairing degrees differ");
    // iterate over the smaller map
    const SymTensor& small = a.coeffs().size() <= b.coeffs().size() ? a : b;
    const SymTensor& big = (&small == &a) ? b : a;
    Cplx acc = 0.0;
    for (const auto& [k, v] : small.coeffs())
        acc += multiset_multiplicity(k) * v * big.at(k);
    return acc;
}

Cplx inner(const SymTensor& a, const SymTensor& b) { return pairing(a, b.conj()); }

SymTensor trace_tensor(int d) {
    SymTensor t(d, 2);
    for (int k = 0; k < d; ++k) t.set({k, k}, 1.0);
    return t;
}

double WeightProfile::weight(int k) const {
    return std::pow(static_cast<double>(k + 1), p);
}

double weighted_norm(const SymTensor& t, const WeightProfile& w) {
    double acc = 0.0;
    for (const auto& [k, v] : t.coeffs()) {
        double wp = 1.0;
        for (int idx : k) wp *= w.weight(idx);
        acc += multiset_multiplicity(k) * std::norm(v) * wp * wp;
    }
    return std::sqrt(acc);
}

bool approx_equal(const SymTensor& a, const SymTensor& b, double tol) {
    return max_entry_diff(a, b) <= tol;
}

double max_entry_diff(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim() || a.degree() != b.degree())
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const auto& [k, v] : a.coeffs())
        worst = std::max(worst, std::abs(v - b.at(k)));
    for (const auto& [k, v] : b.coeffs())
        worst = std::max(worst, std::abs(v - a.at(k)));
    return worst;
}

} // namespace mlcalc
