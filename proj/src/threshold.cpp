#include "rdlab/threshold.hpp"

#include "rdlab/errors.hpp"
#include "rdlab/indicator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdlab {

Family Family::two_bump(double r) {
    if (!(r >= 0.0)) throw std::invalid_argument("two_bump: r must be >= 0");
    std::ostringstream name;
    name << "two_bump(r=" << r << ")";
    return Family(name.str(), [r](GridPtr grid, double L) {
        if (L <= 0.0) return Field::zeros(grid);
        return indicator_datum(grid, {{-L - r, -r}, {r, L + r}});
    });
}

Family Family::single_block() {
    return Family("single_block", [](GridPtr grid, double L) {
        if (L <= 0.0) return Field::zeros(grid);
        return indicator_datum(grid, {{-0.5 * L, 0.5 * L}});
    });
}

Family Family::scaled_profile(Field shape) {
    for (int i = 0; i < shape.size(); ++i)
        if (!(shape[i] >= 0.0))
            throw std::invalid_argument("scaled_profile: shape must be nonnegative");
    return Family("scaled_profile", [shape = std::move(shape)](GridPtr grid, double L) {
        if (!shape.grid()->same_mesh(*grid))
            throw std::invalid_argument("scaled_profile: grid mismatch");
        Field out = Field::zeros(grid);
        for (int i = 0; i < out.size(); ++i) out[i] = std::min(1.0, L * shape[i]);
        return out;
    });
}

Family Family::custom(std::string name, std::function<Field(GridPtr, double)> make) {
    return Family(std::move(name), std::move(make));
}

Field Family::datum(GridPtr grid, double L) const {
    if (!(L >= 0.0)) throw std::invalid_argument("family datum: L must be >= 0");
    return make_(std::move(grid), L);
}

Fate probe_fate(const Nonlinearity& nl, const Field& datum, const ThresholdParams& params) {
    if (!params.fate.calibrated())
        throw std::invalid_argument("probe_fate: fate parameters not calibrated");
    Fate observed = Undecided{0.0, 0.0};
    auto certificate = [&](double t, const Field& u) {
        Fate f = classify_sample(t, u, nl, params.fate);
        if (!is_undecided(f)) {
            observed = f;
            return true;
        }
        return false;
    };

    // T_max escalation x2 up to the cap, realized as one continuous run with
    // the extended horizon; certificates stop it early in the decided cases,
    // so the cost matches the literal doubling schedule.
    SolverParams sp = params.solver;
    sp.T_max = params.solver.T_max * std::pow(2.0, params.max_T_escalations);
    auto [t_end, final_field] = evolve_observe(nl, datum, sp, certificate);
    if (!is_undecided(observed)) return observed;
    double sup = 0.0;
    for (double v : final_field.values()) sup = std::max(sup, v);
    return Undecided{t_end, sup};
}

namespace {

// Evolves the mid datum, tracking the closest approach to W; stops once the
// solution has left the neighbourhood of W decisively.
Trajectory run_mid_trajectory(const Nonlinearity& nl, const Field& datum,
                              const ThresholdParams& params, const GroundState& gs,
                              double& dist_min, double& t_min) {
    SolverParams sp = params.solver;
    sp.store_stride = params.mid_store_stride;
    dist_min = 1e300;
    t_min = 0.0;
    auto stop = [&](double t, const Field& u) {
        double d = sup_distance(u, gs.W);
        if (d < dist_min) {
            dist_min = d;
            t_min = t;
        }
        return dist_min < 0.05 && d > std::max(10.0 * dist_min, 0.1);
    };
    return evolve(nl, datum, sp, stop);
}

} // namespace

ThresholdResult find_critical_length(const Family& family, const Nonlinearity& nl,
                                     GridPtr grid, const ThresholdParams& params,
                                     const GroundState& gs) {
    if (!params.fate.calibrated())
        throw std::invalid_argument("find_critical_length: fate parameters not calibrated");
    const Grid& g = *grid;
    double tol = params.tol_L > 0.0
                     ? params.tol_L
                     : 1e-6 * std::max(std::abs(g.x_min()), std::abs(g.x_max()));
    double cap = params.L_cap > 0.0 ? params.L_cap : 0.5 * (g.x_max() - g.x_min());

    ThresholdResult res;
    res.bracket_converged = false;

    // Doubling: establish a certified bracket. L = 0 is extinct by definition.
    double L_lo = 0.0, L_hi = -1.0;
    for (double L = params.L_init; L <= cap; L *= 2.0) {
        Fate f = probe_fate(nl, family.datum(grid, L), params);
        ++res.probes;
        if (is_extinction(f)) {
            L_lo = L;
        } else if (is_invasion(f)) {
            L_hi = L;
            break;
        } else {
            std::ostringstream d;
            d << family.name() << ": probe at L = " << L
              << " stayed Undecided through all T escalations";
            res.diagnostics = d.str();
            throw BudgetError(res.diagnostics);
        }
    }
    if (L_hi < 0.0)
        throw BudgetError(family.name() + ": no invasion below the search cap");

    while (L_hi - L_lo > tol) {
        double mid = 0.5 * (L_lo + L_hi);
        Fate f = probe_fate(nl, family.datum(grid, mid), params);
        ++res.probes;
        if (is_invasion(f)) {
            L_hi = mid;
        } else if (is_extinction(f)) {
            L_lo = mid;
        } else {
            std::ostringstream d;
            d << family.name() << ": budget exhausted at bracket [" << L_lo << ", " << L_hi
              << "]; reporting the bracket achieved";
            res.diagnostics = d.str();
            break;
        }
    }
    res.L_lo = L_lo;
    res.L_hi = L_hi;
    res.L_star = 0.5 * (L_lo + L_hi);
    res.bracket_converged = (L_hi - L_lo) <= tol;

    res.mid_traj = run_mid_trajectory(nl, family.datum(grid, res.L_star), params, gs,
                                      res.dist_to_W, res.T_c);
    return res;
}

Trajectory threshold_trajectory(const ThresholdResult& result, const GroundState& gs,
                                double tol_W) {
    if (!(result.dist_to_W <= tol_W)) {
        std::ostringstream msg;
        msg << "threshold_trajectory: closest approach " << result.dist_to_W
            << " never reached tol_W = " << tol_W << "; tighten tol_L";
        throw NumericError(msg.str());
    }
    Trajectory out;
    out.grid = result.mid_traj.grid;
    for (int k = 0; k < result.mid_traj.size(); ++k) {
        if (result.mid_traj.times[k] > result.T_c + 1e-12) break;
        out.times.push_back(result.mid_traj.times[k]);
        out.fields.push_back(result.mid_traj.fields[k]);
    }
    out.splice_time = result.T_c;
    out.steady_state = gs.W;
    out.validate();
    return out;
}

double hover_time(const Trajectory& traj, const GroundState& gs, double band) {
    double total = 0.0;
    for (int k = 0; k + 1 < traj.size(); ++k) {
        if (sup_distance(traj.fields[k], gs.W) < band)
            total += traj.times[k + 1] - traj.times[k];
    }
    return total;
}

} // namespace rdlab
