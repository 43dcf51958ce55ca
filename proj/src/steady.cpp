#include "rdlab/steady.hpp"

#include "rdlab/errors.hpp"
#include "rdlab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdlab {

namespace {

// Monotone cumulative table x(p) on evenly spaced parameter nodes with the
// analytic derivative g = dx/dp stored alongside, inverted per query by a
// local cubic Hermite model plus Newton.
struct CumulativeTable {
    std::vector<double> p, x, g;

    double x_end() const { return x.back(); }

    double invert(double xq) const {
        auto it = std::upper_bound(x.begin(), x.end(), xq);
        size_t k = (it == x.begin()) ? 0 : static_cast<size_t>(it - x.begin()) - 1;
        k = std::min(k, x.size() - 2);
        double h = p[k + 1] - p[k];
        double x0 = x[k], x1 = x[k + 1];
        double m0 = g[k] * h, m1 = g[k + 1] * h; // slopes in unit-interval time
        double t = (x1 > x0) ? (xq - x0) / (x1 - x0) : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        for (int iter = 0; iter < 40; ++iter) {
            double t2 = t * t, t3 = t2 * t;
            double val = (2 * t3 - 3 * t2 + 1) * x0 + (t3 - 2 * t2 + t) * m0 +
                         (-2 * t3 + 3 * t2) * x1 + (t3 - t2) * m1;
            double der = (6 * t2 - 6 * t) * x0 + (3 * t2 - 4 * t + 1) * m0 +
                         (-6 * t2 + 6 * t) * x1 + (3 * t2 - 2 * t) * m1;
            if (der == 0.0) break;
            double step = (val - xq) / der;
            t -= step;
            t = std::clamp(t, 0.0, 1.0);
            if (std::abs(step) < 1e-15) break;
        }
        return p[k] + t * h;
    }
};

// Cumulative composite Simpson tabulated at the pair-boundary nodes. The
// first call seeds the table at p0; later calls continue from the stored end
// (p0 is then ignored).
template <class F>
void simpson_extend(CumulativeTable& tab, const F& integrand, double p0, double h,
                    int n_pairs) {
    if (tab.p.empty()) {
        tab.p.push_back(p0);
        tab.x.push_back(0.0);
        tab.g.push_back(integrand(p0));
    }
    double x = tab.x.back();
    double p = tab.p.back();
    double g_even = tab.g.back();
    for (int k = 0; k < n_pairs; ++k) {
        double gm = integrand(p + h);
        double g2 = integrand(p + 2 * h);
        x += h / 3.0 * (g_even + 4.0 * gm + g2);
        p += 2 * h;
        tab.p.push_back(p);
        tab.x.push_back(x);
        tab.g.push_back(g2);
        g_even = g2;
    }
}

// Interior rows of A = -D2 - diag(f'(., W)); dirichlet_zero convention.
void linearized_bands(const Nonlinearity& nl, const Field& W, std::vector<double>& lo,
                      std::vector<double>& di, std::vector<double>& up) {
    const Grid& g = *W.grid();
    int m = g.n() - 2;
    double r = 1.0 / (g.dx() * g.dx());
    lo.assign(m, -r);
    up.assign(m, -r);
    di.resize(m);
    for (int i = 0; i < m; ++i) di[i] = 2.0 * r - nl.fp(g.node(i + 1), W[i + 1]);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

double rayleigh_interior(const std::vector<double>& lo, const std::vector<double>& di,
                         const std::vector<double>& up, const std::vector<double>& v,
                         std::vector<double>& work) {
    work.resize(v.size());
    tridiag_apply(lo, di, up, v, work);
    return dot(v, work) / dot(v, v);
}

} // namespace

GroundState ground_state(const Nonlinearity& nl, GridPtr grid) {
    if (!nl.homogeneous())
        throw std::invalid_argument(
            "ground_state: heterogeneous reaction unsupported here; seed ground_state_newton "
            "with the homogeneous state instead");
    if (!nl.bistable())
        throw std::invalid_argument("ground_state: nonlinearity must be certified bistable");

    const Grid& g = *grid;
    double beta = nl.beta_star();
    double f_b = nl.f0(beta);
    double kappa = std::sqrt(-nl.fprime0());
    if (!(f_b > 0.0)) throw NumericError("ground_state: f(beta*) must be positive");

    // Peak region: w = beta - tau^2 removes the inverse-sqrt singularity.
    // h1(tau) = -2(F(beta - tau^2) - F(beta)) / tau^2; for the cubic this is
    // an exact polynomial in tau^2, so no cancellation near the peak.
    double w_switch = 0.5 * beta;
    double tau_sw = std::sqrt(beta - w_switch);
    bool cubic = nl.is_cubic();
    double fp_b = cubic ? nl.fp0(beta) : 0.0;
    double fpp_b = cubic ? (-6.0 * beta + 2.0 * (1.0 + nl.cubic_a())) : 0.0;
    double F_b = nl.primitive(beta);
    auto h1 = [&](double tau) {
        double s = tau * tau;
        if (cubic) return 2.0 * f_b - fp_b * s + (fpp_b / 3.0) * s * s + 0.5 * s * s * s;
        if (tau < 1e-6) return 2.0 * f_b;
        return -2.0 * (nl.primitive(beta - s) - F_b) / s;
    };
    auto g1 = [&](double tau) { return 2.0 / std::sqrt(h1(tau)); };

    CumulativeTable peak;
    simpson_extend(peak, g1, 0.0, tau_sw / 8192.0, 4096);
    double x_sw = peak.x_end();

    // Tail region in sigma = -ln w. q(w) = -2F(w)/w^2 stays O(1) down to
    // w = 0 (polynomial for the cubic), so the integrand 1/sqrt(q) is smooth.
    auto q_of_w = [&](double w) {
        if (cubic) {
            double a = nl.cubic_a();
            return 0.5 * w * w - 2.0 * (1.0 + a) * w / 3.0 + a;
        }
        return -2.0 * nl.primitive(w) / (w * w);
    };
    auto g2 = [&](double sigma) { return 1.0 / std::sqrt(q_of_w(std::exp(-sigma))); };

    double x_need = std::max(std::abs(g.x_min()), std::abs(g.x_max()));
    CumulativeTable tail;
    double sigma0 = -std::log(w_switch);
    const double chunk = 2.0;
    const int pairs_per_chunk = 256;
    simpson_extend(tail, g2, sigma0, chunk / (2.0 * pairs_per_chunk), pairs_per_chunk);
    while (x_sw + tail.x_end() < x_need + 2.0 && tail.p.back() < 320.0)
        simpson_extend(tail, g2, 0.0, chunk / (2.0 * pairs_per_chunk), pairs_per_chunk);
    double x_tab_end = x_sw + tail.x_end();
    double w_tab_end = std::exp(-tail.p.back());

    auto w_of_x = [&](double xa) {
        if (xa <= 0.0) return beta;
        if (xa <= x_sw) {
            double tau = peak.invert(xa);
            return beta - tau * tau;
        }
        if (xa <= x_tab_end) {
            double sigma = tail.invert(xa - x_sw);
            return std::exp(-sigma);
        }
        return w_tab_end * std::exp(-kappa * (xa - x_tab_end));
    };

    Field W = Field::zeros(grid);
    bool symmetric = std::abs(g.x_min() + g.x_max()) < 1e-12;
    if (symmetric) {
        // Mirror explicitly so W(-x) = W(x) holds to the bit.
        for (int i = 0; i <= (g.n() - 1) / 2; ++i) {
            int j = g.n() - 1 - i; // right-half partner, node(j) >= 0
            double v = w_of_x(g.node(j));
            W[i] = v;
            W[j] = v;
        }
    } else {
        for (int i = 0; i < g.n(); ++i) W[i] = w_of_x(std::abs(g.node(i)));
    }

    GroundState out;
    out.W = std::move(W);
    out.beta_star = beta;
    out.decay_rate = kappa;
    return out;
}

Field ground_state_newton(const Nonlinearity& nl, const Field& seed, int max_iter,
                          double tol) {
    const Grid& g = *seed.grid();
    int n = g.n(), m = n - 2;
    double r = 1.0 / (g.dx() * g.dx());
    Field W = seed;

    auto residual = [&](const Field& f, std::vector<double>& out) {
        out.resize(m);
        for (int i = 1; i + 1 < n; ++i)
            out[i - 1] = -(f[i + 1] - 2.0 * f[i] + f[i - 1]) * r - nl.f(g.node(i), f[i]);
    };

    std::vector<double> res, lo(m), di(m), up(m), delta;
    residual(W, res);
    double best = 0.0;
    for (double v : res) best = std::max(best, std::abs(v));

    for (int iter = 0; iter < max_iter; ++iter) {
        if (best <= tol) return W;
        for (int i = 0; i < m; ++i) {
            lo[i] = -r;
            up[i] = -r;
            di[i] = 2.0 * r - nl.fp(g.node(i + 1), W[i + 1]);
        }
        TridiagSolver solver;
        solver.factor(lo, di, up);
        delta = res;
        solver.solve(delta);
        // damped update with backtracking on the residual sup
        double s = 1.0;
        for (int bt = 0; bt < 30; ++bt, s *= 0.5) {
            Field trial = W;
            for (int i = 0; i < m; ++i) trial[i + 1] -= s * delta[i];
            std::vector<double> res2;
            double worst = 0.0;
            bool ok = true;
            try {
                residual(trial, res2);
                for (double v : res2) worst = std::max(worst, std::abs(v));
            } catch (const std::domain_error&) {
                ok = false;
            }
            if (ok && (worst < best || best < 1e-14)) {
                W = std::move(trial);
                res = std::move(res2);
                best = worst;
                break;
            }
            if (bt == 29) throw NumericError("ground_state_newton: line search failed");
        }
    }
    if (best > tol) throw NumericError("ground_state_newton: no convergence");
    return W;
}

double pde_residual_sup(const Nonlinearity& nl, const Field& W) {
    const Grid& g = *W.grid();
    double r = 1.0 / (g.dx() * g.dx());
    double worst = 0.0;
    for (int i = 1; i + 1 < g.n(); ++i) {
        double resid = -(W[i + 1] - 2.0 * W[i] + W[i - 1]) * r - nl.f(g.node(i), W[i]);
        worst = std::max(worst, std::abs(resid));
    }
    return worst;
}

EigenPair principal_eigenpair(const Nonlinearity& nl, const Field& W, int max_iter) {
    const Grid& g = *W.grid();
    int n = g.n(), m = n - 2;
    std::vector<double> lo, di, up;
    linearized_bands(nl, W, lo, di, up);

    std::vector<double> v(m), y, work;
    for (int i = 0; i < m; ++i) v[i] = std::max(W[i + 1], 1e-8);
    double nv = nrm2(v);
    for (double& z : v) z /= nv;

    double shift = rayleigh_interior(lo, di, up, v, work) - 0.5;
    auto factor_shifted = [&](double s) {
        std::vector<double> ds(di);
        for (double& z : ds) z -= s;
        TridiagSolver solver;
        solver.factor(lo, ds, up);
        return solver;
    };
    TridiagSolver solver = factor_shifted(shift);

    const double tol = 1e-12;
    double lambda_ii = 0.0, resid = 1e300;
    for (int iter = 1; iter <= max_iter; ++iter) {
        y = v;
        solver.solve(y);
        double mu = dot(v, y);          // approximates 1/(lambda - shift)
        lambda_ii = shift + 1.0 / mu;
        double ny = nrm2(y);
        for (double& z : y) z /= ny;
        if (dot(y, v) < 0.0)
            for (double& z : y) z = -z;
        v = y;

        work.resize(m);
        tridiag_apply(lo, di, up, v, work);
        double rho = dot(v, work);
        resid = 0.0;
        for (int i = 0; i < m; ++i) {
            double e = work[i] - rho * v[i];
            resid += e * e;
        }
        resid = std::sqrt(resid);
        if (resid <= tol) break;
        if (iter == 5) {
            shift = rho - 0.05;
            solver = factor_shifted(shift);
        }
    }
    if (resid > tol)
        throw NumericError("principal_eigenpair: inverse iteration stagnated above the "
                           "1e-12 residual target");

    // orientation and strict interior positivity
    double total = 0.0;
    for (double z : v) total += z;
    if (total < 0.0)
        for (double& z : v) z = -z;
    double vmax = 0.0;
    for (double z : v) {
        if (!(z > 0.0)) throw NumericError("principal_eigenpair: eigenvector lost positivity");
        vmax = std::max(vmax, z);
    }

    Field phi = Field::zeros(W.grid());
    for (int i = 0; i < m; ++i) phi[i + 1] = v[i] / vmax;

    EigenPair out;
    out.lambda = lambda_ii;
    out.phi = std::move(phi);
    return out;
}

double rayleigh_quotient(const Nonlinearity& nl, const Field& W, const Field& psi) {
    const Grid& g = *W.grid();
    int m = g.n() - 2;
    std::vector<double> lo, di, up, v(m), work;
    for (int i = 0; i < m; ++i) v[i] = psi[i + 1];
    double denom = dot(v, v);
    if (denom == 0.0) throw std::invalid_argument("rayleigh_quotient: zero field");
    linearized_bands(nl, W, lo, di, up);
    work.resize(m);
    tridiag_apply(lo, di, up, v, work);
    return dot(v, work) / denom;
}

std::pair<double, Field> second_eigenpair(const Nonlinearity& nl, const Field& W,
                                          const EigenPair& first, int max_iter) {
    const Grid& g = *W.grid();
    int m = g.n() - 2;
    std::vector<double> lo, di, up, work;
    linearized_bands(nl, W, lo, di, up);

    std::vector<double> phi1(m);
    for (int i = 0; i < m; ++i) phi1[i] = first.phi[i + 1];
    double np = nrm2(phi1);
    for (double& z : phi1) z /= np;

    auto deflate = [&](std::vector<double>& z) {
        double c = dot(z, phi1);
        for (int i = 0; i < m; ++i) z[i] -= c * phi1[i];
    };

    // odd-ish seed: the derivative of W is a near-eigenvector for the second mode
    Field dW = centered_derivative(W);
    std::vector<double> v(m);
    for (int i = 0; i < m; ++i) v[i] = dW[i + 1];
    deflate(v);
    double nv = nrm2(v);
    if (nv < 1e-300) throw NumericError("second_eigenvalue: degenerate seed");
    for (double& z : v) z /= nv;

    double shift = first.lambda + 1e-3;
    std::vector<double> ds(di);
    for (double& z : ds) z -= shift;
    TridiagSolver solver;
    solver.factor(lo, ds, up);

    const double tol = 1e-10;
    double rho = 0.0, resid = 1e300;
    for (int iter = 1; iter <= max_iter; ++iter) {
        std::vector<double> y = v;
        solver.solve(y);
        deflate(y);
        double ny = nrm2(y);
        if (ny < 1e-300) throw NumericError("second_eigenvalue: iterate collapsed");
        for (double& z : y) z /= ny;
        if (dot(y, v) < 0.0)
            for (double& z : y) z = -z;
        v = y;
        work.resize(m);
        tridiag_apply(lo, di, up, v, work);
        deflate(work); // residual measured in the deflated complement
        rho = dot(v, work);
        resid = 0.0;
        for (int i = 0; i < m; ++i) {
            double e = work[i] - rho * v[i];
            resid += e * e;
        }
        resid = std::sqrt(resid);
        if (resid <= tol) break;
    }
    if (resid > tol) throw NumericError("second_eigenvalue: inverse iteration stagnated");
    Field psi = Field::zeros(W.grid());
    for (int i = 0; i < m; ++i) psi[i + 1] = v[i];
    return {rho, std::move(psi)};
}

double second_eigenvalue(const Nonlinearity& nl, const Field& W, const EigenPair& first,
                         int max_iter) {
    return second_eigenpair(nl, W, first, max_iter).first;
}

Field apply_linearized_operator(const Nonlinearity& nl, const Field& W, const Field& psi) {
    const Grid& g = *W.grid();
    int m = g.n() - 2;
    std::vector<double> lo, di, up, v(m), out(m);
    linearized_bands(nl, W, lo, di, up);
    for (int i = 0; i < m; ++i) v[i] = psi[i + 1];
    tridiag_apply(lo, di, up, v, out);
    Field res = Field::zeros(W.grid());
    for (int i = 0; i < m; ++i) res[i + 1] = out[i];
    return res;
}

Field centered_derivative(const Field& f) {
    const Grid& g = *f.grid();
    Field out = Field::zeros(f.grid());
    double inv2dx = 1.0 / (2.0 * g.dx());
    for (int i = 1; i + 1 < g.n(); ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2dx;
    return out;
}

} // namespace rdlab
