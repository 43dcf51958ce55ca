#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rdlab/applications.hpp"
#include "rdlab/errors.hpp"

#include <cmath>

using namespace rdlab;

namespace {

struct Setup {
    Nonlinearity nl = Nonlinearity::cubic(0.3);
    GridPtr grid = symmetric_grid(40.0, 1601, Bc::dirichlet_zero);
    GroundState gs = ground_state(nl, grid);
    EigenPair eig = principal_eigenpair(nl, gs.W);
    ThresholdParams thr;
    LinearizedParams lin;

    Setup() {
        thr.solver = SolverParams{};
        thr.fate = calibrate_invasion_box(nl, grid, thr.solver, 0.1);
        thr.tol_L = 1e-5;
    }
    AppContext ctx() const { return AppContext{nl, grid, gs, eig, thr, lin}; }
};

const Setup& setup() {
    static Setup s;
    return s;
}

struct ThresholdFixture {
    ThresholdResult result;
    Trajectory spliced;
    FloquetBundle bundle;
};

const ThresholdFixture& block_run() {
    static ThresholdFixture f = [] {
        const auto& s = setup();
        ThresholdFixture out;
        out.result =
            find_critical_length(Family::single_block(), s.nl, s.grid, s.thr, s.gs);
        out.spliced = threshold_trajectory(out.result, s.gs, s.thr.tol_W);
        out.bundle = compute_bundle(out.spliced, s.nl, s.eig, s.lin);
        return out;
    }();
    return f;
}

} // namespace

TEST_CASE("superlevel intervals of a piecewise-linear profile") {
    auto g = make_grid(0.0, 4.0, 5, Bc::dirichlet_zero); // nodes 0,1,2,3,4
    Field p(g, {0.0, 1.0, 0.2, 1.0, 0.0});
    auto ivs = superlevel_intervals(p, 0.5);
    REQUIRE(ivs.size() == 2);
    CHECK(ivs[0].first == doctest::Approx(0.5));
    CHECK(ivs[0].second == doctest::Approx(1.625));
    CHECK(ivs[1].first == doctest::Approx(2.375));
    CHECK(ivs[1].second == doctest::Approx(3.5));
    CHECK(superlevel_intervals(p, 2.0).empty());
    auto all = superlevel_intervals(Field::constant(g, 1.0), 0.5);
    REQUIRE(all.size() == 1);
    CHECK(all[0].first == 0.0);
    CHECK(all[0].second == 4.0);
}

TEST_CASE("ground-state mass with tail correction") {
    const auto& s = setup();
    double mass = mass_of_ground_state(s.gs);
    CHECK(mass > 0.0);

    // doubling the domain moves the value by almost nothing
    auto wide = symmetric_grid(80.0, 3201, Bc::dirichlet_zero);
    double mass_wide = mass_of_ground_state(ground_state(s.nl, wide));
    CHECK(std::abs(mass_wide - mass) <= 1e-8);

    // distinct nonlinearities have distinct masses
    auto nl2 = Nonlinearity::cubic(0.2);
    double mass2 = mass_of_ground_state(ground_state(nl2, s.grid));
    CHECK(mass2 > 0.0);
    CHECK(mass2 != doctest::Approx(mass).epsilon(1e-3));
}

TEST_CASE("orthogonality residual: steady trajectory degenerates to zero") {
    const auto& s = setup();
    Trajectory steady;
    steady.grid = s.grid;
    for (int k = 0; k <= 10; ++k) {
        steady.times.push_back(0.1 * k);
        steady.fields.push_back(s.gs.W);
    }
    steady.splice_time = 1.0;
    steady.steady_state = s.gs.W;

    LinearizedParams lp = s.lin;
    lp.efolds = 5.0; // short horizon is plenty here
    FloquetBundle b = compute_bundle(steady, s.nl, s.eig, lp);
    OrthogonalityReport rep = orthogonality_residual(steady, b);
    CHECK(rep.degenerate);
    CHECK(rep.median_rho == 0.0);

    Trajectory tooshort;
    tooshort.grid = s.grid;
    tooshort.times = {0.0};
    tooshort.fields = {s.gs.W};
    CHECK_THROWS_AS(orthogonality_residual(tooshort, b), std::invalid_argument);
}

TEST_CASE("adjoint shape settles onto phi by the splice time") {
    const auto& f = block_run();
    double d_splice = 1e300, d_end = 1e300;
    for (auto& [t, d] : convergence_to_phi(f.bundle)) {
        if (std::abs(t - f.bundle.T_splice) <= 0.051) d_splice = std::min(d_splice, d);
        if (std::abs(t - f.bundle.T_end) <= 1e-9) d_end = d;
    }
    CHECK(d_end <= 1e-14);    // terminal condition is phi itself
    CHECK(d_splice <= 1e-6);  // regression guard, recorded from the first run
}

TEST_CASE("under-truncated domain fails the doubling check") {
    // deliberately tiny box: the ground-state tail is O(4e-3) at the wall
    auto nl = Nonlinearity::cubic(0.3);
    auto grid = symmetric_grid(10.0, 401, Bc::dirichlet_zero);
    GroundState gs = ground_state(nl, grid);
    EigenPair eig = principal_eigenpair(nl, gs.W);
    ThresholdParams thr;
    thr.solver = SolverParams{};
    thr.fate = calibrate_invasion_box(nl, grid, thr.solver, 0.1);
    thr.tol_L = 1e-5;
    thr.tol_W = 0.02; // the hover attractor itself is off the true W here
    ThresholdResult res = find_critical_length(Family::single_block(), nl, grid, thr, gs);
    Trajectory spliced = threshold_trajectory(res, gs, thr.tol_W);
    LinearizedParams lin;
    FloquetBundle bundle = compute_bundle(spliced, nl, eig, lin);
    DoublingReport rep = domain_doubling_check(spliced, nl, bundle, thr.solver, lin, 1e-6);
    CHECK_FALSE(rep.pass);
    CHECK(rep.sup_distance > 1e-4);
}

TEST_CASE("adjoint spatial decay on the outer half") {
    const auto& s = setup();
    const auto& f = block_run();
    Field p0 = f.bundle.p.fields.front();
    double sup = sup_norm(p0);
    double delta = 0.9 * std::sqrt(-s.nl.fprime0());
    double x_half = 0.5 * s.grid->x_max();
    double anchor = p0.interp(x_half) / sup;
    // p decays at least at the surrogate rate beyond the half-domain
    for (int i = 0; i < p0.size(); ++i) {
        double x = std::abs(s.grid->node(i));
        if (x <= x_half) continue;
        CHECK(p0[i] / sup <= 2.0 * anchor * std::exp(-delta * (x - x_half)) + 1e-300);
    }
}

TEST_CASE("orthogonality residual on a threshold run") {
    const auto& f = block_run();
    OrthogonalityReport rep = orthogonality_residual(f.spliced, f.bundle);
    CHECK_FALSE(rep.degenerate);
    CHECK(rep.median_rho <= 0.05);
    CHECK(rep.rho.size() >= 10);

    // decisively off-threshold comparison run
    const auto& s = setup();
    Field off = Family::single_block().datum(s.grid, f.result.L_star * 1.2);
    SolverParams sp = s.thr.solver;
    sp.store_stride = s.thr.mid_store_stride;
    sp.T_max = f.spliced.t_last();
    Trajectory off_traj = evolve(s.nl, off, sp);
    off_traj.splice_time = f.spliced.splice_time;
    off_traj.steady_state = s.gs.W;
    // reuse the threshold bundle's p against the off-threshold u
    OrthogonalityReport rep_off = orthogonality_residual(off_traj, f.bundle);
    CHECK(rep_off.median_rho > 2.0 * rep.median_rho);
}

TEST_CASE("perturbation fate prediction for signed directions") {
    const auto& s = setup();
    const auto& f = block_run();
    AppContext ctx = s.ctx();
    const Field& u0 = f.spliced.fields.front();

    // nonnegative direction: positive pairing, invasion for small eps
    Field hp = Field::zeros(s.grid);
    for (int i = 0; i < s.grid->n(); ++i) {
        double x = s.grid->node(i);
        hp[i] = (1.0 - u0[i]) * 0.5 * std::exp(-0.5 * x * x);
    }
    hp[0] = hp[s.grid->n() - 1] = 0.0;
    PerturbationReport rp = perturbation_fate(ctx, f.spliced, f.bundle, hp, {0.05, 0.02});
    CHECK(rp.S > 0.0);
    CHECK(rp.predicted == 1);
    CHECK(rp.observed == 1);
    CHECK(rp.agree);

    // nonpositive direction: extinction
    Field hm = Field::zeros(s.grid);
    for (int i = 0; i < s.grid->n(); ++i) {
        double x = s.grid->node(i);
        hm[i] = -u0[i] * 0.5 * std::exp(-0.1 * x * x);
    }
    PerturbationReport rm = perturbation_fate(ctx, f.spliced, f.bundle, hm, {0.05, 0.02});
    CHECK(rm.S < 0.0);
    CHECK(rm.predicted == -1);
    CHECK(rm.observed == -1);
    CHECK(rm.agree);

    // inadmissible perturbation is rejected
    Field big = Field::constant(s.grid, 1.0);
    CHECK_THROWS_AS(perturbation_fate(ctx, f.spliced, f.bundle, big, {0.9}),
                    std::invalid_argument);
}

TEST_CASE("derivative report bookkeeping at one r") {
    const auto& s = setup();
    AppContext ctx = s.ctx();
    DerivativeReport rep = lstar_derivative(ctx, 0.5, 0.05);
    CHECK(rep.rel_gap <= 0.05);
    CHECK(rep.formula_value ==
          doctest::Approx(rep.p_at_r / rep.p_at_Lr - 1.0).epsilon(1e-12));
    CHECK(rep.bracket_width <= s.thr.tol_L);
    CHECK_THROWS_AS(lstar_derivative(ctx, -1.0, 0.05), std::invalid_argument);
    CHECK_THROWS_AS(lstar_derivative(ctx, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("large bump separation flattens the threshold curve") {
    // Bumps far beyond the ground-state width decouple and the slope of
    // L*(r) collapses. Only the finite difference is observable out here:
    // the merge transient lasts so long that no desk-scale bracket keeps the
    // mid trajectory near W, so the adjoint route has no valid splice.
    const auto& s = setup();
    auto slope_at = [&](double r) {
        double lo =
            find_critical_length(Family::two_bump(r - 0.1), s.nl, s.grid, s.thr, s.gs).L_star;
        double hi =
            find_critical_length(Family::two_bump(r + 0.1), s.nl, s.grid, s.thr, s.gs).L_star;
        return (hi - lo) / 0.2;
    };
    double near = slope_at(3.0), far = slope_at(6.0);
    CHECK(std::abs(far) <= 0.1 * std::abs(near));
    CHECK(std::abs(far) <= 0.03);
}
