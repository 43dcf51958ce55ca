#pragma once

#include "rdlab/forward.hpp"
#include "rdlab/steady.hpp"
#include "rdlab/trajectory.hpp"

#include <utility>
#include <vector>

namespace rdlab {

/// Parameters for the linearized (bundle) solves. These reuse the IMEX
/// tridiagonal machinery, but fold the linear reaction coefficient into the
/// implicit solve: the system stays tridiagonal, the step is unconditionally
/// stable, and in the autonomous regime the step operator is a rational
/// function of the discrete linearized operator, so the principal eigenvector
/// is preserved exactly. The backward (adjoint) solve applies the exact
/// transpose of the forward step, which conserves the discrete pairing
/// integral to roundoff for both schemes.
struct LinearizedParams {
    double dt = 0.005;
    int store_stride = 20;
    Scheme scheme = Scheme::imex_cn;
    double efolds = 40.0;      // T_end = T_splice + efolds/|lambda|
    double tol_pair = 1e-6;    // pairing-conservation alarm threshold
    double overflow_cap = 1e250;
};

/// One leg of the bundle. Stored fields carry a per-sample log offset:
/// the represented field at times[k] is fields[k] * exp(log_offset[k]).
/// Offsets stay 0 unless a sup norm crosses overflow_cap.
struct BundleLeg {
    GridPtr grid;
    std::vector<double> times;
    std::vector<Field> fields;
    std::vector<double> log_offset;

    int size() const { return static_cast<int>(times.size()); }
    /// ln(sup norm) of the represented field at stored index k.
    double log_sup(int k) const;
    /// Index of the stored time closest to t (must match within 1e-9).
    int index_of_time(double t) const;
    /// Materializes fields[k] * exp(log_offset[k]).
    Field field_at(int k) const;
};

/// The normalized adjoint/forward pair along a trajectory converging to W,
/// with the eigenpair at W and splice bookkeeping.
struct FloquetBundle {
    BundleLeg p;
    BundleLeg v;
    EigenPair eigen;
    double T_splice = 0.0;
    double T_end = 0.0;
    double pairing_drift = 0.0; // max |pairing - 1| over stored times
};

/// x -> d/du f(x, u(t,x)) with u linearly interpolated between stored samples
/// and u := W exactly for t >= splice_time.
Field linearized_coefficient(const Trajectory& traj, const Nonlinearity& nl, double t);

/// Forward bundle leg: v(0) = phi (sup-normalized), integrated to T_end.
/// Growth is the signal; no renormalization beyond the overflow guard.
BundleLeg solve_forward_bundle(const Trajectory& traj, const Nonlinearity& nl,
                               const EigenPair& eigen, const LinearizedParams& params,
                               double T_end);

/// Adjoint leg: terminal condition p(T_end) = phi (or a caller-provided
/// positive field), integrated backward by transpose stepping. Positivity is
/// checked at every stored sample, never projected.
BundleLeg solve_adjoint(const Trajectory& traj, const Nonlinearity& nl,
                        const EigenPair& eigen, const LinearizedParams& params,
                        double T_end, const Field* terminal = nullptr);

/// Rescales p so that the discrete pairing int p(0) v(0) dx equals 1 and
/// records the worst pairing drift across stored times.
FloquetBundle normalize_bundle(BundleLeg p, BundleLeg v, EigenPair eigen, double T_splice,
                               double T_end, double tol_pair);

/// Full pipeline: T_end = splice + efolds/|lambda| (stride-aligned), both legs,
/// normalization. Requires a spliced trajectory on a dirichlet grid.
FloquetBundle compute_bundle(const Trajectory& traj, const Nonlinearity& nl,
                             const EigenPair& eigen, const LinearizedParams& params);

/// (t, int p(t) leg(t) dx) for stored times shared by the two legs.
std::vector<std::pair<double, double>> pairing_series(const BundleLeg& a, const BundleLeg& b);

struct SeparationResult {
    double gamma_fit = 0.0;
    bool infinite = false; // projection annihilated the direction
    /// (t, ln ||udot(t)||_sup - ln ||v(t)||_sup) at stored times.
    std::vector<std::pair<double, double>> curve;
    double pairing_initial = 0.0; // int p(0) h dx before projection
    BundleLeg udot;               // the evolved projected direction
};

/// Projects h against the bundle (so int p(0) h0 dx = 0), evolves the
/// linearized equation from h0 and fits the decay rate of
/// ln(||udot||/||v||) by least squares over the informative window.
SeparationResult separation_rate(const Trajectory& traj, const Nonlinearity& nl,
                                 const FloquetBundle& bundle, const Field& h,
                                 const LinearizedParams& params);

/// (t, || p(t)/||p(t)||_sup - phi ||_sup) at stored times.
std::vector<std::pair<double, double>> convergence_to_phi(const FloquetBundle& bundle);

struct DoublingReport {
    double sup_distance = 0.0; // normalized p(0,.) difference on the original window
    double tol = 1e-6;
    bool pass = false;
    double lambda_doubled = 0.0;
};

/// Re-evolves the initial datum on the doubled domain, rebuilds the bundle
/// with the same splice time, and reports the sup distance of sup-normalized
/// p(0,.) restricted to the original window.
DoublingReport domain_doubling_check(const Trajectory& traj, const Nonlinearity& nl,
                                     const FloquetBundle& original,
                                     const SolverParams& forward_params,
                                     const LinearizedParams& params, double tol = 1e-6);

} // namespace rdlab
