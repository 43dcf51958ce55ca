#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rdlab/errors.hpp"
#include "rdlab/floquet.hpp"
#include "rdlab/threshold.hpp"

#include <cmath>

using namespace rdlab;

namespace {

struct Setup {
    Nonlinearity nl = Nonlinearity::cubic(0.3);
    GridPtr grid = symmetric_grid(40.0, 1601, Bc::dirichlet_zero);
    GroundState gs = ground_state(nl, grid);
    EigenPair eig = principal_eigenpair(nl, gs.W);
    ThresholdParams params;

    Setup() {
        params.solver = SolverParams{};
        params.fate = calibrate_invasion_box(nl, grid, params.solver, 0.1);
        params.tol_L = 1e-3; // coarse for unit tests
    }
};

const Setup& setup() {
    static Setup s;
    return s;
}

} // namespace

TEST_CASE("family data") {
    const auto& s = setup();
    // psi_0 is the zero datum
    CHECK(sup_norm(Family::two_bump(0.7).datum(s.grid, 0.0)) == 0.0);
    // two_bump(0) of length L equals the centered block of length 2L
    Field tb = Family::two_bump(0.0).datum(s.grid, 1.3);
    Field blk = Family::single_block().datum(s.grid, 2.6);
    CHECK(sup_distance(tb, blk) <= 1e-14);
    // nodewise monotone in L, and mass moves linearly through partial cells
    Field d1 = Family::two_bump(0.5).datum(s.grid, 1.0);
    Field d2 = Family::two_bump(0.5).datum(s.grid, 1.0 + 0.013);
    for (int i = 0; i < d1.size(); ++i) CHECK(d2[i] >= d1[i] - 1e-15);
    CHECK(integral_dx(d2) - integral_dx(d1) == doctest::Approx(2 * 0.013).epsilon(1e-9));
    // scaled profile clamps at 1
    Field shape = Field::zeros(s.grid);
    for (int i = 0; i < shape.size(); ++i)
        shape[i] = std::exp(-s.grid->node(i) * s.grid->node(i));
    Field sp = Family::scaled_profile(shape).datum(s.grid, 3.0);
    CHECK(sup_norm(sp) == 1.0);
    CHECK_THROWS_AS(Family::two_bump(-0.1), std::invalid_argument);
}

TEST_CASE("certified bisection brackets the single-block threshold") {
    const auto& s = setup();
    ThresholdResult res =
        find_critical_length(Family::single_block(), s.nl, s.grid, s.params, s.gs);
    CHECK(res.bracket_converged);
    CHECK(res.L_hi - res.L_lo <= s.params.tol_L);
    // regression baseline, recorded from the first converged run
    CHECK(res.L_star == doctest::Approx(2.8833).epsilon(2e-3));

    // bracket ends re-probe to their certified fates (monotone family)
    Fate lo = probe_fate(s.nl, Family::single_block().datum(s.grid, res.L_lo - 1e-3),
                         s.params);
    Fate hi = probe_fate(s.nl, Family::single_block().datum(s.grid, res.L_hi + 1e-3),
                         s.params);
    CHECK(is_extinction(lo));
    CHECK(is_invasion(hi));
}

TEST_CASE("threshold trajectory hands over to the ground state") {
    const auto& s = setup();
    ThresholdParams tight = s.params;
    tight.tol_L = 1e-5;
    ThresholdResult res =
        find_critical_length(Family::single_block(), s.nl, s.grid, tight, s.gs);
    CHECK(res.dist_to_W <= 1e-3);
    Trajectory thr = threshold_trajectory(res, s.gs, tight.tol_W);
    CHECK(thr.spliced());
    CHECK(*thr.splice_time == doctest::Approx(res.T_c));
    CHECK(thr.t_last() <= res.T_c + 1e-12);

    // the spliced coefficient equals f'(., W) beyond the handover
    Field c = linearized_coefficient(thr, s.nl, res.T_c + 5.0);
    for (int i = 1; i + 1 < s.grid->n(); ++i)
        CHECK(c[i] == doctest::Approx(s.nl.fp0(s.gs.W[i])).epsilon(1e-15));

    // a coarse bracket cannot reach the handover tolerance
    ThresholdParams coarse = s.params;
    coarse.tol_L = 0.3;
    ThresholdResult bad =
        find_critical_length(Family::single_block(), s.nl, s.grid, coarse, s.gs);
    CHECK_THROWS_AS(threshold_trajectory(bad, s.gs, 1e-3), NumericError);
}

TEST_CASE("hover time grows as the bracket tightens") {
    const auto& s = setup();
    double hovers[2];
    int idx = 0;
    for (double tol : {1e-2, 1e-5}) {
        ThresholdParams p = s.params;
        p.tol_L = tol;
        ThresholdResult res =
            find_critical_length(Family::single_block(), s.nl, s.grid, p, s.gs);
        hovers[idx++] = hover_time(res.mid_traj, s.gs, 0.05);
    }
    CHECK(hovers[1] > hovers[0]);
    // logarithmic trend: about ln(10^3)/|lambda| extra per three decades
    CHECK(hovers[1] - hovers[0] > 0.5 * std::log(1e3) / 0.1845);
}

TEST_CASE("constant datum at theta is frozen (ODE analogue)") {
    const auto& s = setup();
    auto gn = symmetric_grid(10.0, 201, Bc::neumann_zero);
    SolverParams sp;
    sp.T_max = 5.0;
    Trajectory t = evolve(s.nl, Field::constant(gn, s.nl.theta()), sp);
    CHECK(sup_distance(t.fields.back(), t.fields.front()) <= 1e-13);
}

TEST_CASE("continuity of the threshold in r") {
    const auto& s = setup();
    ThresholdParams p = s.params;
    p.tol_L = 1e-4;
    double L1 = find_critical_length(Family::two_bump(0.5), s.nl, s.grid, p, s.gs).L_star;
    double L2 = find_critical_length(Family::two_bump(0.55), s.nl, s.grid, p, s.gs).L_star;
    CHECK(std::abs(L2 - L1) <= 2.0 * 0.05);
}
