#ifndef MLCALC_DENSE_TENSOR_HPP
#define MLCALC_DENSE_TENSOR_HPP

#include <algorithm>
#include <vector>

#include "mlcalc/sym_tensor.hpp"

namespace mlcalc {

/// Full d^n array behind the same operations as SymTensor. Reference path for
/// degrees <= 4, used by the test oracles; everything is plain loops on
/// ordered index tuples.
class DenseTensor {
public:
    DenseTensor(int dim, int degree)
        : dim_(dim), degree_(degree), data_(size_of(dim, degree), Cplx(0.0)) {}

    static std::size_t size_of(int dim, int degree) {
        std::size_t s = 1;
        for (int i = 0; i < degree; ++i) s *= static_cast<std::size_t>(dim);
        return s;
    }

    int dim() const { return dim_; }
    int degree() const { return degree_; }

    Cplx& operator[](const std::vector<int>& idx) { return data_[flat(idx)]; }
    Cplx operator[](const std::vector<int>& idx) const { return data_[flat(idx)]; }

    static DenseTensor from_sym(const SymTensor& t) {
        DenseTensor d(t.dim(), t.degree());
        std::vector<int> idx(t.degree(), 0);
        for (std::size_t f = 0; f < d.data_.size(); ++f) {
            d.unflat(f, idx);
            std::vector<int> key = idx;
            std::sort(key.begin(), key.end());
            d.data_[f] = t.at(key);
        }
        return d;
    }

    SymTensor to_sym() const {
        std::vector<std::pair<std::vector<int>, Cplx>> entries;
        std::vector<int> idx(degree_, 0);
        for (std::size_t f = 0; f < data_.size(); ++f) {
            unflat(f, idx);
            if (data_[f] != Cplx(0.0)) entries.emplace_back(idx, data_[f]);
        }
        return SymTensor::from_raw_entries(dim_, degree_, entries);
    }

    /// Average over all permutations of the slots.
    DenseTensor symmetrized() const {
        std::vector<int> perm(degree_);
        for (int i = 0; i < degree_; ++i) perm[i] = i;
        DenseTensor out(dim_, degree_);
        double count = 0.0;
        std::vector<int> idx(degree_, 0), pidx(degree_, 0);
        do {
            for (std::size_t f = 0; f < data_.size(); ++f) {
                unflat(f, idx);
                for (int i = 0; i < degree_; ++i) pidx[i] = idx[perm[i]];
                out.data_[f] += data_[flat(pidx)];
            }
            count += 1.0;
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (auto& v : out.data_) v /= count;
        return out;
    }

    DenseTensor product(const DenseTensor& b) const {
        DenseTensor out(dim_, degree_ + b.degree_);
        std::vector<int> ia(degree_), ib(b.degree_), io(degree_ + b.degree_);
        for (std::size_t f = 0; f < data_.size(); ++f) {
            unflat(f, ia);
            for (std::size_t g = 0; g < b.data_.size(); ++g) {
                b.unflat(g, ib);
                for (int i = 0; i < degree_; ++i) io[i] = ia[i];
                for (int i = 0; i < b.degree_; ++i) io[degree_ + i] = ib[i];
                out.data_[out.flat(io)] = data_[f] * b.data_[g];
            }
        }
        return out;
    }

    /// Pair the last deg(b) slots against b.
    DenseTensor contract_with(const DenseTensor& b) const {
        int n = degree_ - b.degree_;
        DenseTensor out(dim_, n);
        std::vector<int> io(n), ib(b.degree_), ia(degree_);
        for (std::size_t f = 0; f < out.data_.size(); ++f) {
            out.unflat(f, io);
            Cplx acc = 0.0;
            for (std::size_t g = 0; g < b.data_.size(); ++g) {
                b.unflat(g, ib);
                for (int i = 0; i < n; ++i) ia[i] = io[i];
                for (int i = 0; i < b.degree_; ++i) ia[n + i] = ib[i];
                acc += data_[flat(ia)] * b.data_[g];
            }
            out.data_[f] = acc;
        }
        return out;
    }

    Cplx pair(const DenseTensor& b) const {
        Cplx acc = 0.0;
        for (std::size_t f = 0; f < data_.size(); ++f) acc += data_[f] * b.data_[f];
        return acc;
    }

private:
    std::size_t flat(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int i : idx) f = f * dim_ + static_cast<std::size_t>(i);
        return f;
    }
    void unflat(std::size_t f, std::vector<int>& idx) const {
        for (int i = degree_ - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(f % dim_);
            f /= dim_;
        }
    }

    int dim_;
    int degree_;
    std::vector<Cplx> data_;
};

} // namespace mlcalc

#endif
