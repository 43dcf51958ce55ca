#pragma once

#include "rdlab/floquet.hpp"
#include "rdlab/threshold.hpp"

#include <optional>
#include <vector>

namespace rdlab {

/// Shared inputs for the application pipelines. References must outlive the
/// calls; everything is read-only.
struct AppContext {
    const Nonlinearity& nl;
    GridPtr grid;
    const GroundState& gs;
    const EigenPair& eig;
    ThresholdParams thr;
    LinearizedParams lin;
};

// ---------------------------------------------------------------- perturbation

struct PerturbationRow {
    double eps = 0.0;
    Fate fate = Undecided{0.0, 0.0};
};

struct PerturbationReport {
    double S = 0.0;    // int p(0) h dx
    double h_l1 = 0.0;
    double h_sup = 0.0;
    int predicted = 0; // +1 invasion, -1 extinction, 0 no prediction
    std::vector<PerturbationRow> rows;
    int observed = 0;  // stabilized observation, same encoding
    double eps_stabilized = 0.0;
    bool agree = false;
};

/// Evolves u0 + eps*h for decreasing eps until the certified fate stabilizes
/// (two consecutive eps with the same decided fate) and compares against the
/// sign of the adjoint pairing. eps values must keep u0 + eps*h admissible.
PerturbationReport perturbation_fate(const AppContext& ctx, const Trajectory& thr_traj,
                                     const FloquetBundle& bundle, const Field& h,
                                     std::vector<double> eps_list);

// --------------------------------------------------------------- orthogonality

struct OrthogonalityReport {
    std::vector<double> t;
    std::vector<double> rho;
    double median_rho = 0.0;
    double max_rho = 0.0;
    bool degenerate = false; // time derivative vanished everywhere
};

/// Normalized residual rho(t) = |int p du/dt dx| / (||p||_2 ||du/dt||_2) at
/// stored times strictly inside (0, T_splice), with du/dt by centered
/// differences of the stored trajectory samples.
OrthogonalityReport orthogonality_residual(const Trajectory& traj,
                                           const FloquetBundle& bundle);

// ------------------------------------------------------------------ derivative

struct DerivativeReport {
    double r = 0.0;
    double L_star = 0.0;
    double p_at_r = 0.0;  // on the sup-normalized p(0,.) scale
    double p_at_Lr = 0.0;
    double formula_value = 0.0; // p(0,r)/p(0,L*+r) - 1
    double fd_value = 0.0;      // centered difference of L*(.) (one-sided at r=0)
    double rel_gap = 0.0;
    double bracket_width = 0.0;
};

/// Derivative of the critical length of the two-bump family at r, evaluated
/// both through the adjoint boundary values and through finite differences of
/// the threshold itself.
DerivativeReport lstar_derivative(const AppContext& ctx, double r, double fd_step);

// --------------------------------------------------------------------- bathtub

struct BathtubParams {
    double fp_tol = 5e-3; // symmetric-difference mass tolerance between iterates
    int max_outer = 12;
    double kkt_tol = 1e-2;
};

struct BathtubResult {
    Field u0_opt;
    /// Multiplier and all sandwich values live on the bundle's canonical
    /// normalization (int p(0) v(0) dx = 1); c is re-read at the end as the
    /// mean adjoint value on the free boundary of the converged datum.
    double c = 0.0;
    double mass = 0.0;
    int iterations = 0;
    double kkt_violation = 0.0; // mass of intermediate-value nodes off the level set
    bool converged = false;
    // level-set sandwich diagnostics on the converged datum
    double min_p_on_support = 0.0;
    double max_p_on_complement = 0.0; // restricted to |x| <= x_max/2
    std::string diagnostics;
};

/// Fixed-point search for the minimal-mass datum certifying non-extinction:
/// alternate (i) bisection for the multiplier c so the superlevel datum
/// {p_k(0,.) > c} sits exactly at its sharp threshold with (ii) recomputing
/// the adjoint along the new threshold trajectory. Cost j(u) = u, so the
/// datum is an indicator up to partial cells.
BathtubResult bathtub_optimize(const AppContext& ctx, const Family& init_family,
                               const BathtubParams& params);

/// Union of intervals where the piecewise-linear interpolant of p exceeds c.
std::vector<std::pair<double, double>> superlevel_intervals(const Field& p, double c);

/// int W dx by the rectangle rule plus the analytic tail correction
/// 2 W(x_max)/sqrt(|f'(0)|) for the mass beyond the truncated domain.
double mass_of_ground_state(const GroundState& gs);

} // namespace rdlab
