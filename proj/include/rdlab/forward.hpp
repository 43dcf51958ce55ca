#pragma once

#include "rdlab/fate.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/trajectory.hpp"

#include <functional>
#include <optional>
#include <string>

namespace rdlab {

/// Time stepping: reaction explicit, diffusion implicit via a tridiagonal solve.
enum class Scheme { imex_cn, imex_be };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SolverParams {
    double dt = 0.005;
    double T_max = 400.0;
    int store_stride = 20;
    Scheme scheme = Scheme::imex_cn;
    /// Number of leading backward-Euler steps when scheme is imex_cn.
    /// Crank-Nicolson alone violates the discrete maximum principle at
    /// dt/dx^2 > 1, so rough (indicator) data would ring below 0; a short
    /// damped startup smooths the datum first. Fixed count, so the formal
    /// order on smooth data is unchanged.
    int cn_startup_be_steps = 16;

    /// Enforces dt*K < 0.5 with K = sup |f'| on [0,1], plus basic sanity.
    void validate(const Nonlinearity& nl) const;
};

/// One IMEX step on u (no startup logic; exactly the requested scheme).
/// The result is checked, not clamped: values outside [-1e-8, 1+1e-8]
/// raise NumericError.
Field step(const Nonlinearity& nl, const Field& u, double dt, Scheme scheme);

/// Called at every stored time; return true to stop the evolution there.
using StopPredicate = std::function<bool(double t, const Field& u)>;

/// Integrates the Cauchy problem from u0 to T_max (or until stop fires),
/// storing every store_stride-th step plus the final one.
Trajectory evolve(const Nonlinearity& nl, const Field& u0, const SolverParams& params,
                  const StopPredicate& stop = {});

/// Continues a trajectory from its last stored field for extra_T more time.
void evolve_append(Trajectory& traj, const Nonlinearity& nl, const SolverParams& params,
                   double extra_T, const StopPredicate& stop = {});

/// Like evolve, but retains nothing: the observer sees each would-be stored
/// sample and may stop the run. Returns the final (t, field). Fate probes use
/// this to avoid holding long trajectories.
std::pair<double, Field> evolve_observe(const Nonlinearity& nl, const Field& u0,
                                        const SolverParams& params,
                                        const StopPredicate& observer);

/// Scans stored times for a certificate; Undecided{T} if none fires.
Fate classify_fate(const Trajectory& traj, const Nonlinearity& nl, const FateParams& fate);

/// Certificate check on a single sample (Undecided carries t as its horizon).
Fate classify_sample(double t, const Field& u, const Nonlinearity& nl,
                     const FateParams& fate);

/// Finds (alpha_inv, R_inv) such that the box datum alpha_inv*1_(-R,R)
/// reaches u >= 1-delta on the doubled box within T_max, by doubling search
/// on R. alpha defaults to (beta*+1)/2; overrides at or below beta* are
/// rejected.
FateParams calibrate_invasion_box(const Nonlinearity& nl, GridPtr grid,
                                  const SolverParams& params, double delta,
                                  std::optional<double> alpha_override = std::nullopt);

/// Amplitude-alpha indicator of [-R, R] with partial-cell weights.
Field box_datum(GridPtr grid, double alpha, double R);

struct TruncationReport {
    bool pass = false;
    bool sign_ok = false;     // f'(x, u(t,x)) <= 0 on the outer 10% of the domain
    bool boundary_ok = false; // |u| < 1e-8 at the boundary nodes, all stored times
    double worst_fp = 0.0;
    double worst_fp_x = 0.0;
    double worst_fp_t = 0.0;
    double max_boundary_u = 0.0;
    std::string summary;
};

/// Checks that the domain truncation is inert: the linearization coefficient
/// is dissipative near the edges and no solution mass reaches the boundary.
/// A failing report means x_max should be enlarged.
TruncationReport truncation_check(const Trajectory& traj, const Nonlinearity& nl);

} // namespace rdlab
