#include "rdlab/forward.hpp"

#include "rdlab/errors.hpp"
#include "rdlab/indicator.hpp"
#include "rdlab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rdlab {

namespace {

constexpr double kBand = 1e-8;

// Bands of (I - c*D2) for the grid's boundary condition. Dirichlet keeps
// identity rows at the pinned end nodes; Neumann uses the mirror-ghost row.
void implicit_bands(const Grid& g, double c, std::vector<double>& lo,
                    std::vector<double>& di, std::vector<double>& up) {
    int n = g.n();
    double r = c / (g.dx() * g.dx());
    lo.assign(n, 0.0);
    di.assign(n, 1.0);
    up.assign(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
        lo[i] = -r;
        di[i] = 1.0 + 2.0 * r;
        up[i] = -r;
    }
    if (g.bc() == Bc::neumann_zero) {
        di[0] = 1.0 + 2.0 * r;
        up[0] = -2.0 * r;
        lo[n - 1] = -2.0 * r;
        di[n - 1] = 1.0 + 2.0 * r;
    }
}

// out = (I + c*D2) u.
void explicit_half(const Grid& g, double c, const std::vector<double>& u,
                   std::vector<double>& out) {
    int n = g.n();
    double r = c / (g.dx() * g.dx());
    for (int i = 1; i + 1 < n; ++i) out[i] = u[i] + r * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
    if (g.bc() == Bc::neumann_zero) {
        out[0] = u[0] + r * (2.0 * u[1] - 2.0 * u[0]);
        out[n - 1] = u[n - 1] + r * (2.0 * u[n - 2] - 2.0 * u[n - 1]);
    } else {
        out[0] = u[0];
        out[n - 1] = u[n - 1];
    }
}

class NonlinearStepper {
public:
    NonlinearStepper(const Nonlinearity& nl, GridPtr grid, double dt)
        : nl_(nl), grid_(std::move(grid)), dt_(dt) {
        const Grid& g = *grid_;
        n_ = g.n();
        x_.resize(n_);
        for (int i = 0; i < n_; ++i) x_[i] = g.node(i);
        std::vector<double> lo, di, up;
        implicit_bands(g, dt, lo, di, up);
        be_.factor(lo, di, up);
        implicit_bands(g, 0.5 * dt, lo, di, up);
        cn_.factor(lo, di, up);
        rhs_.resize(n_);
        fast_cubic_ = nl.homogeneous() && nl.is_cubic();
        a_ = fast_cubic_ ? nl.cubic_a() : 0.0;
    }

    void advance(std::vector<double>& u, Scheme scheme, double t_next) {
        const Grid& g = *grid_;
        bool dirichlet = g.bc() == Bc::dirichlet_zero;
        if (scheme == Scheme::imex_be) {
            for (int i = 0; i < n_; ++i) rhs_[i] = u[i] + dt_ * reaction(i, u[i]);
            if (dirichlet) {
                rhs_[0] = u[0];
                rhs_[n_ - 1] = u[n_ - 1];
            }
            be_.solve(rhs_);
        } else {
            explicit_half(g, 0.5 * dt_, u, rhs_);
            if (dirichlet)
                for (int i = 1; i + 1 < n_; ++i) rhs_[i] += dt_ * reaction(i, u[i]);
            else
                for (int i = 0; i < n_; ++i) rhs_[i] += dt_ * reaction(i, u[i]);
            cn_.solve(rhs_);
        }
        std::swap(u, rhs_);
        check_band(u, t_next);
    }

private:
    double reaction(int i, double u) const {
        if (fast_cubic_) return u * (1.0 - u) * (u - a_);
        return nl_.f(x_[i], u);
    }

    void check_band(const std::vector<double>& u, double t) const {
        for (int i = 0; i < n_; ++i) {
            double v = u[i];
            if (!std::isfinite(v) || v < -kBand || v > 1.0 + kBand) {
                std::ostringstream msg;
                msg << "invariant region violated: u(" << t << ", " << x_[i] << ") = " << v;
                throw NumericError(msg.str());
            }
        }
    }

    const Nonlinearity& nl_;
    GridPtr grid_;
    double dt_;
    int n_ = 0;
    bool fast_cubic_ = false;
    double a_ = 0.0;
    std::vector<double> x_;
    std::vector<double> rhs_;
    TridiagSolver be_;
    TridiagSolver cn_;
};

void check_initial_datum(const Field& u0) {
    const Grid& g = *u0.grid();
    for (int i = 0; i < u0.size(); ++i)
        if (!(u0[i] >= -1e-12 && u0[i] <= 1.0 + 1e-12))
            throw std::invalid_argument("initial datum must satisfy 0 <= u0 <= 1");
    if (g.bc() == Bc::dirichlet_zero) {
        if (std::abs(u0[0]) > 1e-6 || std::abs(u0[u0.size() - 1]) > 1e-6)
            throw std::invalid_argument(
                "dirichlet_zero: initial datum must vanish at the boundary nodes");
    }
}

} // namespace

std::string to_string(Scheme s) { return s == Scheme::imex_cn ? "imex_cn" : "imex_be"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "imex_cn") return Scheme::imex_cn;
    if (s == "imex_be") return Scheme::imex_be;
    throw std::invalid_argument("unknown scheme: " + s);
}

void SolverParams::validate(const Nonlinearity& nl) const {
    if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (!(T_max > 0.0)) throw std::invalid_argument("solver: T_max must be positive");
    if (store_stride < 1) throw std::invalid_argument("solver: store_stride must be >= 1");
    if (cn_startup_be_steps < 0) throw std::invalid_argument("solver: negative startup count");
    if (!(dt * nl.lipschitz_K() < 0.5))
        throw std::invalid_argument("solver: dt*K must stay below 0.5 (explicit reaction)");
}

Field step(const Nonlinearity& nl, const Field& u, double dt, Scheme scheme) {
    SolverParams p;
    p.dt = dt;
    p.scheme = scheme;
    p.validate(nl);
    NonlinearStepper stepper(nl, u.grid(), dt);
    std::vector<double> v = u.data();
    stepper.advance(v, scheme, dt);
    return Field(u.grid(), std::move(v));
}

Trajectory evolve(const Nonlinearity& nl, const Field& u0, const SolverParams& params,
                  const StopPredicate& stop) {
    params.validate(nl);
    check_initial_datum(u0);
    Field start = u0;
    if (u0.grid()->bc() == Bc::dirichlet_zero) {
        start[0] = 0.0;
        start[start.size() - 1] = 0.0;
    }
    Trajectory traj;
    traj.grid = u0.grid();
    traj.times.push_back(0.0);
    traj.fields.push_back(std::move(start));
    if (!(stop && stop(0.0, traj.fields.front())))
        evolve_append(traj, nl, params, params.T_max, stop);
    return traj;
}

void evolve_append(Trajectory& traj, const Nonlinearity& nl, const SolverParams& params,
                   double extra_T, const StopPredicate& stop) {
    params.validate(nl);
    if (traj.times.empty()) throw std::invalid_argument("evolve_append: empty trajectory");
    NonlinearStepper stepper(nl, traj.grid, params.dt);
    std::vector<double> u = traj.fields.back().data();
    double t0 = traj.times.back();
    long n_steps = std::lround(std::ceil(extra_T / params.dt - 1e-9));
    if (n_steps < 1) return;
    // Startup smoothing applies only at the true start of a CN run.
    long startup = (params.scheme == Scheme::imex_cn && traj.times.size() == 1 && t0 == 0.0)
                       ? params.cn_startup_be_steps
                       : 0;
    for (long k = 1; k <= n_steps; ++k) {
        double t = t0 + static_cast<double>(k) * params.dt;
        Scheme s = (k <= startup) ? Scheme::imex_be : params.scheme;
        stepper.advance(u, s, t);
        if (k % params.store_stride == 0 || k == n_steps) {
            traj.times.push_back(t);
            traj.fields.emplace_back(traj.grid, u);
            if (stop && stop(t, traj.fields.back())) break;
        }
    }
}

std::pair<double, Field> evolve_observe(const Nonlinearity& nl, const Field& u0,
                                        const SolverParams& params,
                                        const StopPredicate& observer) {
    params.validate(nl);
    check_initial_datum(u0);
    Field work = u0;
    if (u0.grid()->bc() == Bc::dirichlet_zero) {
        work[0] = 0.0;
        work[work.size() - 1] = 0.0;
    }
    if (observer && observer(0.0, work)) return {0.0, std::move(work)};

    NonlinearStepper stepper(nl, u0.grid(), params.dt);
    std::vector<double>& u = work.data();
    long n_steps = std::lround(std::ceil(params.T_max / params.dt - 1e-9));
    long startup = (params.scheme == Scheme::imex_cn) ? params.cn_startup_be_steps : 0;
    double t = 0.0;
    for (long k = 1; k <= n_steps; ++k) {
        t = static_cast<double>(k) * params.dt;
        Scheme s = (k <= startup) ? Scheme::imex_be : params.scheme;
        stepper.advance(u, s, t);
        if (k % params.store_stride == 0 || k == n_steps)
            if (observer && observer(t, work)) break;
    }
    return {t, std::move(work)};
}

Fate classify_sample(double t, const Field& u, const Nonlinearity& nl,
                     const FateParams& fate) {
    if (!nl.bistable())
        throw std::invalid_argument("classify: nonlinearity must be certified bistable");
    if (!fate.calibrated())
        throw std::invalid_argument("classify: fate parameters not calibrated");
    const Grid& g = *u.grid();
    double ext_level = nl.theta() * (1.0 - fate.delta);
    double sup = 0.0;
    for (double v : u.values()) sup = std::max(sup, v);
    if (sup < ext_level) return Extinction{t, sup};

    int lo = 0, hi = g.n() - 1;
    while (lo < g.n() && g.node(lo) < -fate.R_inv - 1e-12) ++lo;
    while (hi >= 0 && g.node(hi) > fate.R_inv + 1e-12) --hi;
    if (lo <= hi) {
        double mn = u[lo];
        for (int i = lo; i <= hi; ++i) mn = std::min(mn, u[i]);
        if (mn >= fate.alpha_inv) return Invasion{t, mn};
    }
    return Undecided{t, sup};
}

Fate classify_fate(const Trajectory& traj, const Nonlinearity& nl, const FateParams& fate) {
    for (int k = 0; k < traj.size(); ++k) {
        Fate f = classify_sample(traj.times[k], traj.fields[k], nl, fate);
        if (!is_undecided(f)) return f;
    }
    double sup_final = 0.0;
    for (double v : traj.fields.back().values()) sup_final = std::max(sup_final, v);
    return Undecided{traj.t_last(), sup_final};
}

Field box_datum(GridPtr grid, double alpha, double R) {
    return indicator_datum(std::move(grid), {{-R, R}}, alpha);
}

FateParams calibrate_invasion_box(const Nonlinearity& nl, GridPtr grid,
                                  const SolverParams& params, double delta,
                                  std::optional<double> alpha_override) {
    if (!nl.bistable())
        throw std::invalid_argument("calibrate_invasion_box: nonlinearity must be bistable");
    double beta = nl.beta_star();
    double alpha = alpha_override ? *alpha_override : 0.5 * (beta + 1.0);
    if (!(alpha > beta && alpha < 1.0))
        throw std::invalid_argument(
            "calibrate_invasion_box: alpha_inv must lie in (beta*, 1); below the bistable "
            "barrier no certificate is attempted");

    const Grid& g = *grid;
    double half_span = 0.5 * (g.x_max() - g.x_min());
    for (double R = 1.0; 2.0 * R <= 0.5 * half_span + 1e-9; R *= 2.0) {
        int lo = 0, hi = g.n() - 1;
        while (lo < g.n() && g.node(lo) < -2.0 * R - 1e-12) ++lo;
        while (hi >= 0 && g.node(hi) > 2.0 * R + 1e-12) --hi;
        bool certified = false;
        auto reached = [&](double, const Field& f) {
            double mn = f[lo];
            for (int i = lo; i <= hi; ++i) mn = std::min(mn, f[i]);
            if (mn >= 1.0 - delta) {
                certified = true;
                return true;
            }
            return false;
        };
        evolve(nl, box_datum(grid, alpha, R), params, reached);
        if (certified) {
            FateParams out;
            out.delta = delta;
            out.alpha_inv = alpha;
            out.R_inv = R;
            return out;
        }
    }
    throw BudgetError(
        "calibrate_invasion_box: no box invaded within T_max; enlarge T_max or the domain");
}

TruncationReport truncation_check(const Trajectory& traj, const Nonlinearity& nl) {
    const Grid& g = *traj.grid;
    double span = g.x_max() - g.x_min();
    double left_edge = g.x_min() + 0.1 * span;
    double right_edge = g.x_max() - 0.1 * span;

    TruncationReport rep;
    rep.sign_ok = true;
    rep.boundary_ok = true;
    rep.worst_fp = -1e300;

    for (int k = 0; k < traj.size(); ++k) {
        const Field& f = traj.fields[k];
        double t = traj.times[k];
        for (int i = 0; i < g.n(); ++i) {
            double x = g.node(i);
            if (x > left_edge && x < right_edge) continue;
            double fp = nl.fp(x, f[i]);
            if (fp > rep.worst_fp) {
                rep.worst_fp = fp;
                rep.worst_fp_x = x;
                rep.worst_fp_t = t;
            }
        }
        rep.max_boundary_u = std::max(
            rep.max_boundary_u, std::max(std::abs(f[0]), std::abs(f[g.n() - 1])));
    }
    rep.sign_ok = rep.worst_fp <= 0.0;
    rep.boundary_ok = rep.max_boundary_u < 1e-8;
    rep.pass = rep.sign_ok && rep.boundary_ok;

    std::ostringstream msg;
    if (rep.pass) {
        msg << "truncation ok: worst f' on outer 10% = " << rep.worst_fp
            << ", max boundary |u| = " << rep.max_boundary_u;
    } else {
        msg << "truncation check FAILED (enlarge x_max):";
        if (!rep.sign_ok)
            msg << " f'(x,u) = " << rep.worst_fp << " > 0 at x = " << rep.worst_fp_x
                << ", t = " << rep.worst_fp_t << ";";
        if (!rep.boundary_ok)
            msg << " boundary mass " << rep.max_boundary_u << " >= 1e-8";
    }
    rep.summary = msg.str();
    return rep;
}

std::string to_string(const Fate& f) {
    std::ostringstream s;
    if (auto* e = std::get_if<Extinction>(&f))
        s << "Extinction{t=" << e->t_cert << ", sup=" << e->sup_at_cert << "}";
    else if (auto* v = std::get_if<Invasion>(&f))
        s << "Invasion{t=" << v->t_cert << ", min_on_box=" << v->min_on_box << "}";
    else if (auto* u = std::get_if<Undecided>(&f))
        s << "Undecided{T_max=" << u->T_max << ", sup=" << u->sup_final << "}";
    return s.str();
}

} // namespace rdlab
