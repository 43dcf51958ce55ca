#include "rdlab/floquet.hpp"

#include "rdlab/errors.hpp"
#include "rdlab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdlab {

namespace {

// Interior linearization coefficient c(t) = f'(x, u(t,x)) along a trajectory,
// with a cached constant sample for the spliced (autonomous) regime.
class CoeffProvider {
public:
    CoeffProvider(const Trajectory& traj, const Nonlinearity& nl)
        : traj_(traj), nl_(nl) {
        const Grid& g = *traj.grid;
        m_ = g.n() - 2;
        x_.resize(m_);
        for (int i = 0; i < m_; ++i) x_[i] = g.node(i + 1);
        if (traj.spliced()) {
            cW_.resize(m_);
            const Field& W = *traj.steady_state;
            for (int i = 0; i < m_; ++i) cW_[i] = nl.fp(x_[i], W[i + 1]);
        }
    }

    bool autonomous_at(double t) const {
        return traj_.splice_time && t >= *traj_.splice_time - 1e-12;
    }

    void eval(double t, std::vector<double>& c) const {
        c.resize(m_);
        if (autonomous_at(t)) {
            c = cW_;
            return;
        }
        double t_hi = traj_.times.back();
        if (t > t_hi + 1e-9)
            throw std::out_of_range("linearized coefficient: time beyond stored range");
        t = std::min(t, t_hi);
        int k = traj_.index_at_or_before(t);
        const Field& fa = traj_.fields[k];
        if (k + 1 >= traj_.size() || traj_.times[k] == t) {
            for (int i = 0; i < m_; ++i) c[i] = nl_.fp(x_[i], fa[i + 1]);
            return;
        }
        const Field& fb = traj_.fields[k + 1];
        double s = (t - traj_.times[k]) / (traj_.times[k + 1] - traj_.times[k]);
        for (int i = 0; i < m_; ++i)
            c[i] = nl_.fp(x_[i], (1.0 - s) * fa[i + 1] + s * fb[i + 1]);
    }

    int interior_size() const { return m_; }

private:
    const Trajectory& traj_;
    const Nonlinearity& nl_;
    int m_ = 0;
    std::vector<double> x_;
    std::vector<double> cW_;
};

// Linearized IMEX step on interior vectors. The reaction coefficient sits in
// the implicit matrix, so the forward map is
//   cn: w <- S(t1)^-1 E(t0) w,   S(t) = I - dt/2 (D2 + C(t)),
//                                E(t) = I + dt/2 (D2 + C(t)),
//   be: w <- S(t1)^-1 w,         S(t) = I - dt (D2 + C(t)),
// and the adjoint step applies the exact transpose (all matrices symmetric).
class LinearStepper {
public:
    LinearStepper(const Trajectory& traj, const Nonlinearity& nl, double dt, Scheme scheme)
        : coeff_(traj, nl), dt_(dt), scheme_(scheme) {
        if (traj.grid->bc() != Bc::dirichlet_zero)
            throw std::invalid_argument("bundle solves require a dirichlet_zero grid");
        m_ = coeff_.interior_size();
        r_ = 1.0 / (traj.grid->dx() * traj.grid->dx());
        lo_.assign(m_, 0.0);
        di_.assign(m_, 0.0);
        up_.assign(m_, 0.0);
        tmp_.resize(m_);
    }

    void forward_step(std::vector<double>& w, double t0, double t1) {
        if (scheme_ == Scheme::imex_cn) {
            apply_E(w, tmp_, t0);
            std::swap(w, tmp_);
        }
        ensure_S(t1);
        solver_.solve(w);
    }

    void adjoint_step(std::vector<double>& w, double t1, double t0) {
        ensure_S(t1);
        solver_.solve(w);
        if (scheme_ == Scheme::imex_cn) {
            apply_E(w, tmp_, t0);
            std::swap(w, tmp_);
        }
    }

private:
    void eval_coeff(double t, std::vector<double>& c) {
        // two-slot cache; backward sweeps request each sample twice
        if (have_a_ && t == time_a_) {
            c = ca_;
            return;
        }
        if (have_b_ && t == time_b_) {
            c = cb_;
            return;
        }
        coeff_.eval(t, c);
        time_b_ = time_a_;
        cb_ = ca_;
        have_b_ = have_a_;
        time_a_ = t;
        ca_ = c;
        have_a_ = true;
    }

    void ensure_S(double t) {
        bool autonomous = coeff_.autonomous_at(t);
        if (s_factored_ && ((autonomous && s_autonomous_) || (!autonomous && s_time_ == t)))
            return;
        eval_coeff(t, cs_);
        double th = (scheme_ == Scheme::imex_cn) ? 0.5 * dt_ : dt_;
        for (int i = 0; i < m_; ++i) {
            lo_[i] = -th * r_;
            up_[i] = -th * r_;
            di_[i] = 1.0 + 2.0 * th * r_ - th * cs_[i];
        }
        solver_.factor(lo_, di_, up_);
        s_factored_ = true;
        s_autonomous_ = autonomous;
        s_time_ = t;
    }

    void apply_E(const std::vector<double>& in, std::vector<double>& out, double t) {
        eval_coeff(t, ce_);
        double th = 0.5 * dt_;
        out.resize(m_);
        for (int i = 0; i < m_; ++i) {
            double left = (i > 0) ? in[i - 1] : 0.0;
            double right = (i + 1 < m_) ? in[i + 1] : 0.0;
            out[i] = in[i] + th * (r_ * (left - 2.0 * in[i] + right) + ce_[i] * in[i]);
        }
    }

    CoeffProvider coeff_;
    double dt_;
    Scheme scheme_;
    int m_ = 0;
    double r_ = 0.0;
    std::vector<double> lo_, di_, up_, tmp_, cs_, ce_, ca_, cb_;
    double time_a_ = 0.0, time_b_ = 0.0;
    bool have_a_ = false, have_b_ = false;
    TridiagSolver solver_;
    bool s_factored_ = false;
    bool s_autonomous_ = false;
    double s_time_ = 0.0;
};

std::vector<double> interior_of(const Field& f) {
    std::vector<double> v(f.size() - 2);
    for (size_t i = 0; i < v.size(); ++i) v[i] = f[static_cast<int>(i) + 1];
    return v;
}

Field full_of(GridPtr grid, const std::vector<double>& interior) {
    Field f = Field::zeros(std::move(grid));
    for (size_t i = 0; i < interior.size(); ++i) f[static_cast<int>(i) + 1] = interior[i];
    return f;
}

struct LegRunner {
    const Trajectory& traj;
    const Nonlinearity& nl;
    const LinearizedParams& params;
    bool require_positive = true;

    BundleLeg run(const Field& start, double T_end, bool backward) const {
        long n_steps = std::lround(T_end / params.dt);
        if (n_steps < 1) throw std::invalid_argument("bundle leg: empty time range");
        LinearStepper stepper(traj, nl, params.dt, params.scheme);

        std::vector<double> w = interior_of(start);
        double log_off = 0.0;
        BundleLeg leg;
        leg.grid = traj.grid;

        auto store = [&](long k) {
            leg.times.push_back(static_cast<double>(k) * params.dt);
            leg.fields.push_back(full_of(traj.grid, w));
            leg.log_offset.push_back(log_off);
            if (require_positive)
                for (double z : w)
                    if (!(z > 0.0))
                        throw NumericError(
                            "bundle leg lost positivity (dt too coarse or bad splice)");
        };
        auto rescale_guard = [&] {
            double sup = 0.0;
            for (double z : w) sup = std::max(sup, std::abs(z));
            if (!std::isfinite(sup)) throw NumericError("bundle leg diverged");
            if (sup > params.overflow_cap) {
                for (double& z : w) z /= sup;
                log_off += std::log(sup);
            }
        };

        if (!backward) {
            store(0);
            for (long k = 0; k < n_steps; ++k) {
                stepper.forward_step(w, static_cast<double>(k) * params.dt,
                                     static_cast<double>(k + 1) * params.dt);
                rescale_guard();
                if ((k + 1) % params.store_stride == 0 || k + 1 == n_steps) store(k + 1);
            }
        } else {
            store(n_steps);
            for (long k = n_steps - 1; k >= 0; --k) {
                stepper.adjoint_step(w, static_cast<double>(k + 1) * params.dt,
                                     static_cast<double>(k) * params.dt);
                rescale_guard();
                if (k % params.store_stride == 0 || k == 0) store(k);
            }
            std::reverse(leg.times.begin(), leg.times.end());
            std::reverse(leg.fields.begin(), leg.fields.end());
            std::reverse(leg.log_offset.begin(), leg.log_offset.end());
        }
        return leg;
    }
};

} // namespace

double BundleLeg::log_sup(int k) const {
    return std::log(sup_norm(fields[k])) + log_offset[k];
}

int BundleLeg::index_of_time(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9);
    if (it == times.end() || std::abs(*it - t) > 1e-9)
        throw std::out_of_range("bundle leg: time not stored");
    return static_cast<int>(it - times.begin());
}

Field BundleLeg::field_at(int k) const {
    return scaled(fields[k], std::exp(log_offset[k]));
}

Field linearized_coefficient(const Trajectory& traj, const Nonlinearity& nl, double t) {
    CoeffProvider provider(traj, nl);
    std::vector<double> c;
    provider.eval(t, c);
    Field out = full_of(traj.grid, c);
    const Grid& g = *traj.grid;
    out[0] = nl.fp(g.x_min(), 0.0);
    out[g.n() - 1] = nl.fp(g.x_max(), 0.0);
    return out;
}

BundleLeg solve_forward_bundle(const Trajectory& traj, const Nonlinearity& nl,
                               const EigenPair& eigen, const LinearizedParams& params,
                               double T_end) {
    return LegRunner{traj, nl, params}.run(eigen.phi, T_end, false);
}

BundleLeg solve_adjoint(const Trajectory& traj, const Nonlinearity& nl,
                        const EigenPair& eigen, const LinearizedParams& params,
                        double T_end, const Field* terminal) {
    const Field& term = terminal ? *terminal : eigen.phi;
    for (int i = 1; i + 1 < term.size(); ++i)
        if (!(term[i] > 0.0))
            throw std::invalid_argument("solve_adjoint: terminal condition must be positive");
    return LegRunner{traj, nl, params}.run(term, T_end, true);
}

FloquetBundle normalize_bundle(BundleLeg p, BundleLeg v, EigenPair eigen, double T_splice,
                               double T_end, double tol_pair) {
    if (p.size() != v.size())
        throw std::invalid_argument("normalize_bundle: legs have different storage");
    double pairing0 =
        inner_dx(p.fields.front(), v.fields.front()) *
        std::exp(p.log_offset.front() + v.log_offset.front());
    if (!(pairing0 > 0.0))
        throw NumericError("normalize_bundle: nonpositive pairing (internal error)");
    double shift = std::log(pairing0);
    for (double& off : p.log_offset) off -= shift;

    FloquetBundle bundle;
    bundle.p = std::move(p);
    bundle.v = std::move(v);
    bundle.eigen = std::move(eigen);
    bundle.T_splice = T_splice;
    bundle.T_end = T_end;

    double drift = 0.0;
    for (const auto& [t, val] : pairing_series(bundle.p, bundle.v))
        drift = std::max(drift, std::abs(val - 1.0));
    bundle.pairing_drift = drift;
    if (drift > tol_pair)
        throw NumericError("normalize_bundle: pairing drift " + std::to_string(drift) +
                           " exceeds tolerance (legs inconsistent)");
    return bundle;
}

FloquetBundle compute_bundle(const Trajectory& traj, const Nonlinearity& nl,
                             const EigenPair& eigen, const LinearizedParams& params) {
    if (!traj.spliced())
        throw std::invalid_argument("compute_bundle: trajectory must carry splice metadata");
    if (!(eigen.lambda < 0.0))
        throw std::invalid_argument("compute_bundle: requires an unstable state (lambda < 0)");
    double T_splice = *traj.splice_time;
    double block = params.dt * params.store_stride;
    double T_target = T_splice + params.efolds / (-eigen.lambda);
    double T_end = block * std::ceil(T_target / block - 1e-12);

    BundleLeg v = solve_forward_bundle(traj, nl, eigen, params, T_end);
    BundleLeg p = solve_adjoint(traj, nl, eigen, params, T_end);
    return normalize_bundle(std::move(p), std::move(v), eigen, T_splice, T_end,
                            params.tol_pair);
}

std::vector<std::pair<double, double>> pairing_series(const BundleLeg& a, const BundleLeg& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("pairing_series: legs have different storage");
    std::vector<std::pair<double, double>> out;
    out.reserve(a.size());
    for (int k = 0; k < a.size(); ++k) {
        if (std::abs(a.times[k] - b.times[k]) > 1e-9)
            throw std::invalid_argument("pairing_series: stored times differ");
        double val = inner_dx(a.fields[k], b.fields[k]) *
                     std::exp(a.log_offset[k] + b.log_offset[k]);
        out.emplace_back(a.times[k], val);
    }
    return out;
}

SeparationResult separation_rate(const Trajectory& traj, const Nonlinearity& nl,
                                 const FloquetBundle& bundle, const Field& h,
                                 const LinearizedParams& params) {
    SeparationResult res;
    Field p0 = bundle.p.fields.front();
    double off_p0 = bundle.p.log_offset.front();
    res.pairing_initial = inner_dx(p0, h) * std::exp(off_p0);

    const Field& v0 = bundle.v.fields.front(); // offset 0 by construction
    Field h0 = lin_comb(1.0, h, -res.pairing_initial, v0);
    double scale = std::max(1.0, sup_norm(h));
    if (sup_norm(h0) <= 1e-12 * scale) {
        res.infinite = true;
        res.gamma_fit = std::numeric_limits<double>::infinity();
        return res;
    }

    LegRunner runner{traj, nl, params};
    runner.require_positive = false; // projected directions change sign
    res.udot = runner.run(h0, bundle.T_end, false);

    res.curve.reserve(res.udot.size());
    for (int k = 0; k < res.udot.size(); ++k) {
        double r = res.udot.log_sup(k) - bundle.v.log_sup(k);
        res.curve.emplace_back(res.udot.times[k], r);
    }

    // Fit window: skip the initial transient, stop before the roundoff
    // plateau where the annihilated bundle component re-emerges.
    double T = bundle.T_end;
    double r_floor = res.curve.front().second;
    for (const auto& [t, r] : res.curve) r_floor = std::min(r_floor, r);
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, r] : res.curve)
        if (t >= 0.05 * T && t <= 0.8 * T && r >= r_floor + 2.0) pts.emplace_back(t, r);
    if (pts.size() < 4) {
        // short horizons: fall back to the raw window
        pts.clear();
        for (const auto& [t, r] : res.curve)
            if (t >= 0.05 * T && t <= 0.8 * T) pts.emplace_back(t, r);
    }
    if (pts.size() < 4) throw NumericError("separation_rate: degenerate fit window");

    double n = static_cast<double>(pts.size());
    double st = 0, sr = 0, stt = 0, str = 0;
    for (const auto& [t, r] : pts) {
        st += t;
        sr += r;
        stt += t * t;
        str += t * r;
    }
    double slope = (n * str - st * sr) / (n * stt - st * st);
    res.gamma_fit = -slope;
    return res;
}

std::vector<std::pair<double, double>> convergence_to_phi(const FloquetBundle& bundle) {
    std::vector<std::pair<double, double>> out;
    out.reserve(bundle.p.size());
    for (int k = 0; k < bundle.p.size(); ++k) {
        const Field& pk = bundle.p.fields[k];
        double sup = sup_norm(pk);
        double d = 0.0;
        for (int i = 0; i < pk.size(); ++i)
            d = std::max(d, std::abs(pk[i] / sup - bundle.eigen.phi[i]));
        out.emplace_back(bundle.p.times[k], d);
    }
    return out;
}

DoublingReport domain_doubling_check(const Trajectory& traj, const Nonlinearity& nl,
                                     const FloquetBundle& original,
                                     const SolverParams& forward_params,
                                     const LinearizedParams& params, double tol) {
    if (!traj.spliced())
        throw std::invalid_argument("domain_doubling_check: trajectory must be spliced");
    const Grid& g = *traj.grid;
    GridPtr g2 = doubled_grid(g);
    if (g2->n() > 200001) throw BudgetError("domain_doubling_check: memory budget exceeded");

    int offset = (g2->n() - g.n()) / 2;
    Field u0 = Field::zeros(g2);
    const Field& orig0 = traj.fields.front();
    for (int i = 0; i < g.n(); ++i) u0[i + offset] = orig0[i];

    double T_c = *traj.splice_time;
    SolverParams fp = forward_params;
    fp.T_max = T_c;
    // mirror the input's storage cadence so coefficient interpolation matches
    if (traj.size() > 1)
        fp.store_stride = std::max(
            1, static_cast<int>(std::lround((traj.times[1] - traj.times[0]) / fp.dt)));
    Trajectory traj2 = evolve(nl, u0, fp);
    traj2.splice_time = traj2.t_last(); // same handover time as the original run
    GroundState gs2 = ground_state(nl, g2);
    traj2.steady_state = gs2.W;

    EigenPair eig2 = principal_eigenpair(nl, gs2.W);
    FloquetBundle bundle2 = compute_bundle(traj2, nl, eig2, params);

    const Field& pa = original.p.fields.front();
    const Field& pb = bundle2.p.fields.front();
    double sup_a = sup_norm(pa);
    double sup_b = 0.0;
    for (int i = 0; i < g.n(); ++i) sup_b = std::max(sup_b, std::abs(pb[i + offset]));
    double dist = 0.0;
    for (int i = 0; i < g.n(); ++i)
        dist = std::max(dist, std::abs(pa[i] / sup_a - pb[i + offset] / sup_b));

    DoublingReport rep;
    rep.sup_distance = dist;
    rep.tol = tol;
    rep.pass = dist <= tol;
    rep.lambda_doubled = eig2.lambda;
    return rep;
}

} // namespace rdlab
