#pragma once

#include "rdlab/forward.hpp"
#include "rdlab/steady.hpp"

#include <functional>
#include <string>

namespace rdlab {

/// A monotone one-parameter family of initial data L -> datum(L):
/// L < L' implies datum(L) <= datum(L') nodewise. Indicator families use
/// partial-cell weighting so datum(L) is continuous in L below the mesh size.
class Family {
public:
    /// 1 on (-L-r, -r) u (r, L+r).
    static Family two_bump(double r);
    /// One centered interval of length L.
    static Family single_block();
    /// min(1, L*shape) for a nonnegative shape profile.
    static Family scaled_profile(Field shape);
    /// Custom monotone family.
    static Family custom(std::string name, std::function<Field(GridPtr, double)> make);

    Field datum(GridPtr grid, double L) const;
    const std::string& name() const { return name_; }

private:
    Family(std::string name, std::function<Field(GridPtr, double)> make)
        : name_(std::move(name)), make_(std::move(make)) {}

    std::string name_;
    std::function<Field(GridPtr, double)> make_;
};

struct ThresholdParams {
    double tol_L = 0.0;  // 0 -> 1e-6 * max|x| on the grid
    double L_init = 1.0; // doubling search start
    double L_cap = 0.0;  // 0 -> half the domain span
    int max_T_escalations = 3; // T_max doubling x2, up to x8
    double tol_W = 1e-3;       // required closest approach of the mid trajectory
    int mid_store_stride = 10; // finer storage for the handover trajectory
    SolverParams solver;
    FateParams fate; // must be calibrated
};

struct ThresholdResult {
    double L_lo = 0.0;   // certified Extinction
    double L_hi = 0.0;   // certified Invasion
    double L_star = 0.0; // midpoint
    Trajectory mid_traj;
    double dist_to_W = 0.0; // min over stored times of ||u(t) - W||_sup
    double T_c = 0.0;       // time of the closest approach
    bool bracket_converged = false;
    int probes = 0;
    std::string diagnostics;
};

/// Certified fate of one datum, with early stopping and T_max escalation.
Fate probe_fate(const Nonlinearity& nl, const Field& datum, const ThresholdParams& params);

/// Doubling then bisection on L. The bracket stays certified at every
/// iteration (lower end extinct, upper end invading). A probe that stays
/// Undecided after all escalations ends the search with the bracket achieved
/// so far and bracket_converged = false.
ThresholdResult find_critical_length(const Family& family, const Nonlinearity& nl,
                                     GridPtr grid, const ThresholdParams& params,
                                     const GroundState& gs);

/// Truncates the mid trajectory at its closest approach to W and attaches the
/// splice metadata; this is the trajectory the bundle solves consume.
/// Fails if the approach never reaches params.tol_W (tighten tol_L).
Trajectory threshold_trajectory(const ThresholdResult& result, const GroundState& gs,
                                double tol_W);

/// Total stored time with ||u(t) - W||_sup below the band.
double hover_time(const Trajectory& traj, const GroundState& gs, double band = 0.05);

} // namespace rdlab
