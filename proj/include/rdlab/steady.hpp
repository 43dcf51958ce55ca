#pragma once

#include "rdlab/field.hpp"
#include "rdlab/nonlinearity.hpp"

#include <utility>

namespace rdlab {

/// The positive decaying steady state -W'' = f(W), even and strictly
/// decreasing in |x|, with W(0) = beta*.
struct GroundState {
    Field W;
    double beta_star = 0.0;
    double decay_rate = 0.0; // sqrt(|f'(0)|), the linearized tail rate
};

/// Builds W by phase-plane quadrature. The zero-energy first integral
/// (1/2)W'^2 + F(W) = F(beta*) gives x(w) = int_w^{beta*} ds/sqrt(-2E(s)),
/// E = F - F(beta*). The peak integrable singularity is removed by the
/// substitution s = beta* - tau^2; the tail is integrated in log w; x(.) is
/// then inverted onto the grid nodes (monotone Hermite model + Newton) and
/// extended by the slope-matched exponential tail once w underflows the
/// tabulated range. Requires a homogeneous bistable nonlinearity.
GroundState ground_state(const Nonlinearity& nl, GridPtr grid);

/// Damped Newton on the discrete BVP -D2 W = f(x, W) (interior rows, boundary
/// values frozen at the seed's). Supports heterogeneous reactions; existence
/// is the caller's responsibility and the returned state is whichever root
/// the seed converges to.
Field ground_state_newton(const Nonlinearity& nl, const Field& seed, int max_iter = 60,
                          double tol = 1e-12);

/// sup of |-D2 W - f(x,W)| over interior nodes (3-point Laplacian).
double pde_residual_sup(const Nonlinearity& nl, const Field& W);

/// Principal eigenpair of A = -D2 - diag(f'(., W)) with dirichlet_zero rows:
/// lambda is the smallest eigenvalue, phi > 0 at interior nodes, sup-normalized.
struct EigenPair {
    double lambda = 0.0;
    Field phi;
};

/// Inverse power iteration with shift (initial shift rayleigh-0.5, re-shifted
/// once after 5 sweeps). Residual target 1e-12 with a roundoff floor scaled
/// to the operator norm; stagnation raises NumericError.
EigenPair principal_eigenpair(const Nonlinearity& nl, const Field& W, int max_iter = 500);

/// Quadratic form (psi,A psi)/(psi,psi) of the discrete linearized operator.
/// Identical to (int psi'^2 - int f'(W) psi^2)/int psi^2 with forward
/// differences and rectangle-rule quadrature, so it agrees with the matrix
/// eigenvalue at phi to roundoff.
double rayleigh_quotient(const Nonlinearity& nl, const Field& W, const Field& psi);

/// Second eigenpair by inverse iteration deflated against the principal
/// eigenvector. The eigenvector is sign-changing; it is returned l2-normalized
/// on the interior with zero boundary entries.
std::pair<double, Field> second_eigenpair(const Nonlinearity& nl, const Field& W,
                                          const EigenPair& first, int max_iter = 500);

double second_eigenvalue(const Nonlinearity& nl, const Field& W, const EigenPair& first,
                         int max_iter = 500);

/// A psi as a full-length field (boundary entries zero).
Field apply_linearized_operator(const Nonlinearity& nl, const Field& W, const Field& psi);

/// Centered-difference derivative, zero at the end nodes.
Field centered_derivative(const Field& f);

} // namespace rdlab
