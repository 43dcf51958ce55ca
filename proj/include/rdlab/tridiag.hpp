#pragma once

#include <span>
#include <vector>

namespace rdlab {

/// Thomas algorithm with a stored factorization, so constant-coefficient
/// systems are factored once and solved per step. No pivoting; all systems
/// assembled in this project are strictly diagonally dominant.
class TridiagSolver {
public:
    TridiagSolver() = default;

    /// lower[i] multiplies x[i-1] in row i (lower[0] ignored);
    /// upper[i] multiplies x[i+1] in row i (upper[n-1] ignored).
    void factor(std::span<const double> lower, std::span<const double> diag,
                std::span<const double> upper);

    /// Solves in place: b holds the right-hand side on entry, the solution on exit.
    void solve(std::span<double> b) const;

    int size() const { return static_cast<int>(pivot_inv_.size()); }

private:
    std::vector<double> lower_;
    std::vector<double> upper_mod_; // upper/pivot from the forward sweep
    std::vector<double> pivot_inv_;
};

/// Multiplies a tridiagonal matrix by x into y (same band convention).
void tridiag_apply(std::span<const double> lower, std::span<const double> diag,
                   std::span<const double> upper, std::span<const double> x,
                   std::span<double> y);

} // namespace rdlab
