#include "rdlab/acceptance.hpp"

#include "rdlab/applications.hpp"
#include "rdlab/csvio.hpp"
#include "rdlab/errors.hpp"
#include "rdlab/indicator.hpp"
#include "rdlab/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace rdlab::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    std::ostringstream detail;
    bool pass = true;

    // records "name=value (<= bound)" and accumulates the verdict
    void le(const char* name, double value, double bound) {
        pass = pass && (value <= bound);
        detail << name << "=" << value << (value <= bound ? " (<= " : " (VIOLATES <= ")
               << bound << ") ";
    }
    void lt(const char* name, double value, double bound) {
        pass = pass && (value < bound);
        detail << name << "=" << value << (value < bound ? " (< " : " (VIOLATES < ")
               << bound << ") ";
    }
    void ok(const char* name, bool cond) {
        pass = pass && cond;
        detail << name << (cond ? " ok " : " FAILED ");
    }
    void note(const std::string& s) { detail << s << " "; }
};

Config acceptance_config(const Config& base) {
    Config cfg = base;
    // bracket tolerance pinned so every mid trajectory reaches tol_W = 1e-3
    cfg.set("threshold.tol_L", "2e-6");
    return cfg;
}

ThresholdResult run_family(const Lab& lab, const Family& fam) {
    return find_critical_length(fam, lab.nl, lab.grid, lab.thr, lab.gs);
}

struct BundleRun {
    ThresholdResult result;
    Trajectory spliced;
    FloquetBundle bundle;
};

BundleRun threshold_bundle(const Lab& lab, const Family& fam) {
    BundleRun out;
    out.result = run_family(lab, fam);
    out.spliced = threshold_trajectory(out.result, lab.gs, lab.thr.tol_W);
    out.bundle = compute_bundle(out.spliced, lab.nl, lab.eig, lab.lin);
    return out;
}

Trajectory frozen_at_ground_state(const Lab& lab) {
    Trajectory traj;
    traj.grid = lab.grid;
    traj.times = {0.0};
    traj.fields = {lab.gs.W};
    traj.splice_time = 0.0;
    traj.steady_state = lab.gs.W;
    return traj;
}

// Smooth random mixture of gaussian bumps.
Field random_bump_mix(GridPtr grid, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0), center(-6.0, 6.0),
        width(0.3, 1.5);
    struct Bump {
        double a, c, w;
    };
    std::vector<Bump> bumps(4);
    for (auto& b : bumps) b = {amp(rng), center(rng), width(rng)};
    Field h = Field::zeros(grid);
    for (int i = 0; i < grid->n(); ++i) {
        double x = grid->node(i);
        double v = 0.0;
        for (const auto& b : bumps) {
            double z = (x - b.c) / b.w;
            v += b.a * std::exp(-0.5 * z * z);
        }
        h[i] = v;
    }
    return h;
}

// Admissible sign-structured direction at a {0,1}-valued datum:
// h = (1-u0) g+ - u0 g-, so u0 + eps*h stays in [0,1] for eps*sup|g| <= 1.
Field admissible_direction(const Field& u0, std::mt19937_64& rng) {
    Field g = random_bump_mix(u0.grid(), rng);
    double s = sup_norm(g);
    Field h = Field::zeros(u0.grid());
    if (s == 0.0) return h;
    for (int i = 0; i < u0.size(); ++i) {
        double gi = 0.5 * g[i] / s; // sup |g| scaled to 1/2
        h[i] = gi >= 0.0 ? (1.0 - u0[i]) * gi : u0[i] * gi;
    }
    int n = u0.size();
    h[0] = 0.0;
    h[n - 1] = 0.0;
    return h;
}

CriterionResult c1_ground_state(const Config& base) {
    Check c;
    auto nl = Nonlinearity::cubic(base.get_double("nonlinearity.a"));
    double x_max = base.get_double("grid.x_max");
    int n = base.get_int("grid.n");
    auto grid = symmetric_grid(x_max, n, Bc::dirichlet_zero);

    GroundState gs = ground_state(nl, grid);
    double res1 = pde_residual_sup(nl, gs.W);
    c.le("residual", res1, 1e-3);
    c.le("W0_err", std::abs(gs.W[(n - 1) / 2] - nl.beta_star()), 1e-6);

    auto fine = symmetric_grid(x_max, 2 * (n - 1) + 1, Bc::dirichlet_zero);
    double res2 = pde_residual_sup(nl, ground_state(nl, fine).W);
    c.le("refine_ratio", res2 / res1, 0.32); // "quarters" with slack
    return {1, "ground-state", c.pass, c.detail.str(), 0.0};
}

CriterionResult c2_spectrum(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    c.lt("lambda", lab.eig.lambda, 0.0);
    double rq = rayleigh_quotient(lab.nl, lab.gs.W, lab.eig.phi);
    c.le("ii_vs_rayleigh", std::abs(lab.eig.lambda - rq), 1e-8);

    Field dW = centered_derivative(lab.gs.W);
    Field AdW = apply_linearized_operator(lab.nl, lab.gs.W, dW);
    double dx = lab.grid->dx();
    c.le("near_null_ratio", norms(AdW).l2 / norms(dW).l2, 5.0 * dx * dx);
    return {2, "spectrum", c.pass, c.detail.str(), 0.0};
}

CriterionResult c3_autonomous_oracle(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    Trajectory frozen = frozen_at_ground_state(lab);
    const double T = 20.0;
    BundleLeg v = solve_forward_bundle(frozen, lab.nl, lab.eig, lab.lin, T);
    BundleLeg p = solve_adjoint(frozen, lab.nl, lab.eig, lab.lin, T);

    double worst_v = 0.0, worst_p = 0.0;
    for (int k = 0; k < v.size(); ++k) {
        double amp = std::exp(-lab.eig.lambda * v.times[k]);
        Field vk = v.field_at(k);
        for (int i = 0; i < vk.size(); ++i)
            worst_v = std::max(worst_v, std::abs(vk[i] - lab.eig.phi[i] * amp) / amp);
    }
    for (int k = 0; k < p.size(); ++k) {
        double amp = std::exp(-lab.eig.lambda * (T - p.times[k]));
        Field pk = p.field_at(k);
        for (int i = 0; i < pk.size(); ++i)
            worst_p = std::max(worst_p, std::abs(pk[i] - lab.eig.phi[i] * amp) / amp);
    }
    c.le("v_rel_err", worst_v, 1e-4);
    c.le("p_rel_err", worst_p, 1e-4);
    return {3, "autonomous-floquet-oracle", c.pass, c.detail.str(), 0.0};
}

CriterionResult c4_adjoint_uniqueness(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    BundleRun run = threshold_bundle(lab, Family::single_block());

    Field ones = Field::zeros(lab.grid);
    for (int i = 1; i + 1 < lab.grid->n(); ++i) ones[i] = 1.0;
    BundleLeg p_ones =
        solve_adjoint(run.spliced, lab.nl, lab.eig, lab.lin, run.bundle.T_end, &ones);

    const Field& a = run.bundle.p.fields.front();
    const Field& b = p_ones.fields.front();
    double sa = sup_norm(a), sb = sup_norm(b), gap = 0.0;
    for (int i = 0; i < a.size(); ++i)
        gap = std::max(gap, std::abs(a[i] / sa - b[i] / sb));
    c.le("uniqueness_gap", gap, 1e-3);
    c.note("T_end=" + fmt_double(run.bundle.T_end));
    return {4, "adjoint-uniqueness", c.pass, c.detail.str(), 0.0};
}

CriterionResult c5_exponential_separation(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    BundleRun run = threshold_bundle(lab, Family::single_block());

    std::mt19937_64 rng(501);
    for (int k = 0; k < 10; ++k) {
        Field h = random_bump_mix(lab.grid, rng);
        SeparationResult sep = separation_rate(run.spliced, lab.nl, run.bundle, h, lab.lin);
        std::ostringstream name;
        name << "gamma_" << k;
        c.pass = c.pass && sep.gamma_fit > 0.0;
        c.detail << name.str() << "=" << sep.gamma_fit
                 << (sep.gamma_fit > 0.0 ? " " : " (VIOLATES > 0) ");
    }

    // autonomous case against the discrete spectral gap
    auto [lam2, psi2] = second_eigenpair(lab.nl, lab.gs.W, lab.eig);
    Trajectory frozen = frozen_at_ground_state(lab);
    LinearizedParams lp = lab.lin;
    FloquetBundle ab;
    {
        const double T = 40.0;
        BundleLeg v = solve_forward_bundle(frozen, lab.nl, lab.eig, lp, T);
        BundleLeg p = solve_adjoint(frozen, lab.nl, lab.eig, lp, T);
        ab = normalize_bundle(std::move(p), std::move(v), lab.eig, 0.0, T, lp.tol_pair);
    }
    SeparationResult sep = separation_rate(frozen, lab.nl, ab, psi2, lp);
    double gap_theory = lam2 - lab.eig.lambda;
    c.le("autonomous_gap_rel_err", std::abs(sep.gamma_fit / gap_theory - 1.0), 0.05);
    return {5, "exponential-separation", c.pass, c.detail.str(), 0.0};
}

CriterionResult c6_sharp_threshold(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    std::vector<std::pair<std::string, Family>> families;
    families.emplace_back("single_block", Family::single_block());
    for (double r : {0.5, 1.0, 2.0}) {
        std::ostringstream name;
        name << "two_bump(r=" << r << ")";
        families.emplace_back(name.str(), Family::two_bump(r));
    }
    for (auto& [name, fam] : families) {
        ThresholdResult res = run_family(lab, fam);
        c.ok((name + " converged").c_str(), res.bracket_converged);
        c.le((name + " width").c_str(), res.L_hi - res.L_lo, 1e-5);
        c.le((name + " dist_W").c_str(), res.dist_to_W, 1e-3);
    }
    return {6, "sharp-threshold", c.pass, c.detail.str(), 0.0};
}

CriterionResult c7_instability_theorem(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    BundleRun run = threshold_bundle(lab, Family::single_block());
    AppContext ctx = lab.app();

    Field p0 = run.bundle.p.field_at(0);
    double p_sup = sup_norm(p0);
    const Field& u0 = run.spliced.fields.front();

    std::mt19937_64 rng(707);
    std::vector<double> eps_list{0.1, 0.05, 0.02, 0.01, 0.005, 0.002};
    int agree = 0, tested = 0, attempts = 0;
    while (tested < 20 && attempts < 400) {
        ++attempts;
        Field h = admissible_direction(u0, rng);
        double S = inner_dx(p0, h);
        Norms nh = norms(h);
        if (nh.l1 == 0.0 || std::abs(S) < 0.1 * nh.l1 * p_sup) continue; // margin gate
        ++tested;
        PerturbationReport rep = perturbation_fate(ctx, run.spliced, run.bundle, h, eps_list);
        if (rep.agree) ++agree;
        c.detail << "dir" << tested << ": S=" << rep.S << " pred=" << rep.predicted
                 << " obs=" << rep.observed << (rep.agree ? " " : " MISMATCH ");
    }
    c.ok("sampled 20 margined directions", tested == 20);
    c.ok("20/20 agreement", agree == tested && tested == 20);
    return {7, "instability-theorem", c.pass, c.detail.str(), 0.0};
}

CriterionResult c8_orthogonality(const Config& base) {
    Check c;
    double medians[3] = {0, 0, 0};
    const char* tols[3] = {"1e-4", "1e-6", "1e-7"};
    for (int i = 0; i < 3; ++i) {
        Config cfg = base;
        cfg.set("threshold.tol_L", tols[i]);
        Lab lab = Lab::make(cfg);
        BundleRun run = threshold_bundle(lab, Family::single_block());
        OrthogonalityReport rep = orthogonality_residual(run.spliced, run.bundle);
        medians[i] = rep.median_rho;
        c.note(std::string("median(") + tols[i] + ")=" + fmt_double(rep.median_rho));
    }
    c.le("median_at_1e-6", medians[1], 0.05);
    c.lt("median_1e-7_vs_1e-4", medians[2], medians[0]);
    return {8, "orthogonality-corollary", c.pass, c.detail.str(), 0.0};
}

CriterionResult c9_derivative_formula(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    AppContext ctx = lab.app();
    const double fd_step = 0.05;
    double gap_default_r05 = 0.0;
    for (double r : {0.25, 0.5, 1.0}) {
        DerivativeReport rep = lstar_derivative(ctx, r, fd_step);
        std::ostringstream name;
        name << "rel_gap(r=" << r << ")";
        c.le(name.str().c_str(), rep.rel_gap, 0.05);
        if (r == 0.5) gap_default_r05 = rep.rel_gap;
    }

    // doubled resolution: dx/2, dt/4, storage strides scaled to keep the
    // stored-time spacing (and memory) unchanged
    Config fine = acceptance_config(base);
    fine.set("grid.n", std::to_string(2 * (base.get_int("grid.n") - 1) + 1));
    fine.set("solver.dt", fmt_double(base.get_double("solver.dt") / 4.0));
    fine.set("solver.store_stride", std::to_string(base.get_int("solver.store_stride") * 4));
    fine.set("threshold.mid_stride", "40");
    Lab lab2 = Lab::make(fine);
    AppContext ctx2 = lab2.app();
    DerivativeReport rep2 = lstar_derivative(ctx2, 0.5, fd_step);
    c.lt("rel_gap(r=0.5, doubled)", rep2.rel_gap, gap_default_r05);
    return {9, "derivative-formula", c.pass, c.detail.str(), 0.0};
}

CriterionResult c10_bathtub(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    AppContext ctx = lab.app();
    BathtubParams bp;
    bp.fp_tol = base.get_double("bathtub.fp_tol");
    bp.kkt_tol = base.get_double("bathtub.kkt_tol");
    bp.max_outer = base.get_int("bathtub.max_outer");

    BathtubResult a = bathtub_optimize(ctx, Family::single_block(), bp);
    BathtubResult b = bathtub_optimize(ctx, Family::two_bump(1.0), bp);
    for (const BathtubResult* r : {&a, &b}) {
        c.ok("converged", r->converged);
        c.ok("sandwich_lower", r->min_p_on_support >= r->c - bp.kkt_tol);
        c.ok("sandwich_upper", r->c - bp.kkt_tol >= r->max_p_on_complement - 2 * bp.kkt_tol);
        c.le("kkt_violation_mass", r->kkt_violation, 2.0 * lab.grid->dx());
        c.lt("mass_vs_W", r->mass, mass_of_ground_state(lab.gs));
    }
    c.le("seed_mass_gap", std::abs(a.mass - b.mass), 2.0 * bp.fp_tol);
    c.note("mass=" + fmt_double(a.mass) + " massW=" + fmt_double(mass_of_ground_state(lab.gs)));
    return {10, "bathtub-optimizer", c.pass, c.detail.str(), 0.0};
}

CriterionResult c11_truncation(const Config& base) {
    Check c;
    Lab lab = Lab::make(acceptance_config(base));
    BundleRun run = threshold_bundle(lab, Family::single_block());
    DoublingReport rep =
        domain_doubling_check(run.spliced, lab.nl, run.bundle, lab.solver, lab.lin, 1e-6);
    c.le("doubling_sup_distance", rep.sup_distance, 1e-6);

    std::vector<std::pair<std::string, Family>> families;
    families.emplace_back("single_block", Family::single_block());
    for (double r : {0.5, 1.0, 2.0}) {
        std::ostringstream name;
        name << "two_bump(r=" << r << ")";
        families.emplace_back(name.str(), Family::two_bump(r));
    }
    for (auto& [name, fam] : families) {
        ThresholdResult res = run_family(lab, fam);
        TruncationReport tr = truncation_check(res.mid_traj, lab.nl);
        c.ok((name + " truncation").c_str(), tr.pass);
        if (!tr.pass) c.note(tr.summary);
    }
    return {11, "truncation-validity", c.pass, c.detail.str(), 0.0};
}

double budget_seconds(int id) {
    switch (id) {
        case 1: return 1.0;
        case 2: return 5.0;
        case 3: return 10.0;
        case 4: return 60.0;
        case 5: return 120.0;
        case 6: return 600.0;
        case 7: return 900.0;
        case 8: return 600.0;
        case 9: return 1800.0;
        case 10: return 2700.0;
        case 11: return 600.0;
    }
    return 0.0;
}

} // namespace

const std::vector<int>& all_ids() {
    static const std::vector<int> ids{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    return ids;
}

CriterionResult run_criterion(int id, const Config& base) {
    auto t0 = Clock::now();
    CriterionResult res;
    switch (id) {
        case 1: res = c1_ground_state(base); break;
        case 2: res = c2_spectrum(base); break;
        case 3: res = c3_autonomous_oracle(base); break;
        case 4: res = c4_adjoint_uniqueness(base); break;
        case 5: res = c5_exponential_separation(base); break;
        case 6: res = c6_sharp_threshold(base); break;
        case 7: res = c7_instability_theorem(base); break;
        case 8: res = c8_orthogonality(base); break;
        case 9: res = c9_derivative_formula(base); break;
        case 10: res = c10_bathtub(base); break;
        case 11: res = c11_truncation(base); break;
        default: throw std::invalid_argument("unknown criterion id");
    }
    res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (res.seconds >= budget_seconds(id)) {
        res.pass = false;
        res.detail += "RUNTIME BUDGET EXCEEDED ";
    }
    return res;
}

int run(const std::vector<int>& ids, const Config& base, std::FILE* out) {
    int failures = 0;
    for (int id : ids) {
        CriterionResult res;
        try {
            res = run_criterion(id, base);
        } catch (const std::exception& e) {
            res.id = id;
            res.name = "criterion";
            res.pass = false;
            res.detail = std::string("exception: ") + e.what();
        }
        std::fprintf(out, "%s %2d %s: %s[%.1fs]\n", res.pass ? "PASS" : "FAIL", id,
                     res.name.c_str(), res.detail.c_str(), res.seconds);
        std::fflush(out);
        if (!res.pass) ++failures;
    }
    return failures;
}

} // namespace rdlab::acceptance
