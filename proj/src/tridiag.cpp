#include "rdlab/tridiag.hpp"

#include "rdlab/errors.hpp"

#include <cmath>

namespace rdlab {

void TridiagSolver::factor(std::span<const double> lower, std::span<const double> diag,
                           std::span<const double> upper) {
    size_t n = diag.size();
    lower_.assign(lower.begin(), lower.end());
    upper_mod_.resize(n);
    pivot_inv_.resize(n);

    double piv = diag[0];
    if (piv == 0.0 || !std::isfinite(piv))
        throw NumericError("tridiagonal factorization: zero pivot (internal error)");
    pivot_inv_[0] = 1.0 / piv;
    upper_mod_[0] = upper[0] * pivot_inv_[0];
    for (size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i] * upper_mod_[i - 1];
        if (piv == 0.0 || !std::isfinite(piv))
            throw NumericError("tridiagonal factorization: zero pivot (internal error)");
        pivot_inv_[i] = 1.0 / piv;
        upper_mod_[i] = upper[i] * pivot_inv_[i];
    }
}

void TridiagSolver::solve(std::span<double> b) const {
    size_t n = pivot_inv_.size();
    b[0] *= pivot_inv_[0];
    for (size_t i = 1; i < n; ++i) b[i] = (b[i] - lower_[i] * b[i - 1]) * pivot_inv_[i];
    for (size_t i = n - 1; i-- > 0;) b[i] -= upper_mod_[i] * b[i + 1];
}

void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x,
                   std::span<double> y) {
    size_t n = diag.size();
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + upper[0] * x[1];
    for (size_t i = 1; i + 1 < n; ++i)
        y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
    y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

} // namespace rdlab
