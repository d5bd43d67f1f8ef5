#ifndef MLCALC_LINSOLVE_HPP
#define MLCALC_LINSOLVE_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "mlcalc/errors.hpp"

namespace mlcalc {

/// Dense complex LU solve with partial pivoting, row-major A (n x n).
/// Overwrites a and b; the solution lands in b. Desk-scale only.
inline void lu_solve(std::vector<std::complex<double>>& a,
                     std::vector<std::complex<double>>& b, int n) {
    using C = std::complex<double>;
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int col = 0; col < n; ++col) {
        int best = col;
        double mag = std::abs(a[piv[col] * n + col]);
        for (int r = col + 1; r < n; ++r) {
            double m = std::abs(a[piv[r] * n + col]);
            if (m > mag) { mag = m; best = r; }
        }
        if (mag == 0.0) throw InvalidArgument("lu_solve: singular matrix");
        std::swap(piv[col], piv[best]);
        C pivot = a[piv[col] * n + col];
        for (int r = col + 1; r < n; ++r) {
            C f = a[piv[r] * n + col] / pivot;
            a[piv[r] * n + col] = f;
            for (int c = col + 1; c < n; ++c) a[piv[r] * n + c] -= f * a[piv[col] * n + c];
            b[piv[r]] -= f * b[piv[col]];
        }
    }
    std::vector<C> x(n);
    for (int row = n - 1; row >= 0; --row) {
        C acc = b[piv[row]];
        for (int c = row + 1; c < n; ++c) acc -= a[piv[row] * n + c] * x[c];
        x[row] = acc / a[piv[row] * n + row];
    }
    for (int i = 0; i < n; ++i) b[i] = x[i];
}

} // namespace mlcalc

#endif
