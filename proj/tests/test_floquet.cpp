#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rdlab/errors.hpp"
#include "rdlab/floquet.hpp"

#include <cmath>

using namespace rdlab;

namespace {

struct Setup {
    Nonlinearity nl = Nonlinearity::cubic(0.3);
    GridPtr grid = symmetric_grid(40.0, 1601, Bc::dirichlet_zero);
    GroundState gs = ground_state(nl, grid);
    EigenPair eig = principal_eigenpair(nl, gs.W);
    Trajectory frozen; // coefficient autonomous from t = 0

    Setup() {
        frozen.grid = grid;
        frozen.times = {0.0};
        frozen.fields = {gs.W};
        frozen.splice_time = 0.0;
        frozen.steady_state = gs.W;
    }
};

const Setup& setup() {
    static Setup s;
    return s;
}

} // namespace

TEST_CASE("linearized coefficient sampling") {
    const auto& s = setup();
    // spliced regime: exactly f'(., W)
    Field cW = linearized_coefficient(s.frozen, s.nl, 3.0);
    for (int i = 1; i + 1 < s.grid->n(); ++i)
        CHECK(cW[i] == doctest::Approx(s.nl.fp0(s.gs.W[i])).epsilon(1e-15));

    // a zero trajectory gives the constant f'(0) = -a
    Trajectory zero;
    zero.grid = s.grid;
    zero.times = {0.0, 1.0};
    zero.fields = {Field::zeros(s.grid), Field::zeros(s.grid)};
    Field c0 = linearized_coefficient(zero, s.nl, 0.5);
    for (int i = 0; i < c0.size(); ++i) CHECK(c0[i] == doctest::Approx(-0.3).epsilon(1e-15));

    // stored stamps are sampled without interpolation error
    Trajectory two;
    two.grid = s.grid;
    two.times = {0.0, 1.0};
    two.fields = {Field::constant(s.grid, 0.2), Field::constant(s.grid, 0.6)};
    two.fields[0][0] = two.fields[0][s.grid->n() - 1] = 0.0;
    two.fields[1][0] = two.fields[1][s.grid->n() - 1] = 0.0;
    Field at1 = linearized_coefficient(two, s.nl, 1.0);
    CHECK(at1[5] == doctest::Approx(s.nl.fp0(0.6)).epsilon(1e-15));
    Field mid = linearized_coefficient(two, s.nl, 0.5);
    CHECK(mid[5] == doctest::Approx(s.nl.fp0(0.4)).epsilon(1e-15));
    CHECK_THROWS_AS(linearized_coefficient(two, s.nl, 2.0), std::out_of_range);
}

TEST_CASE("autonomous separable solutions") {
    const auto& s = setup();
    LinearizedParams lp;
    const double T = 5.0;
    BundleLeg v = solve_forward_bundle(s.frozen, s.nl, s.eig, lp, T);
    BundleLeg p = solve_adjoint(s.frozen, s.nl, s.eig, lp, T);

    double worst_v = 0.0, worst_p = 0.0, worst_shape = 0.0;
    for (int k = 0; k < v.size(); ++k) {
        double amp = std::exp(-s.eig.lambda * v.times[k]);
        Field vk = v.field_at(k);
        double sup = sup_norm(vk);
        for (int i = 0; i < vk.size(); ++i) {
            worst_v = std::max(worst_v, std::abs(vk[i] - s.eig.phi[i] * amp) / amp);
            worst_shape = std::max(worst_shape, std::abs(vk[i] / sup - s.eig.phi[i]));
        }
    }
    for (int k = 0; k < p.size(); ++k) {
        double amp = std::exp(-s.eig.lambda * (T - p.times[k]));
        Field pk = p.field_at(k);
        for (int i = 0; i < pk.size(); ++i)
            worst_p = std::max(worst_p, std::abs(pk[i] - s.eig.phi[i] * amp) / amp);
    }
    CHECK(worst_v <= 1e-4);
    CHECK(worst_p <= 1e-4);
    CHECK(worst_shape <= 1e-10); // eigenvector preserved exactly by the step operator

    FloquetBundle b = normalize_bundle(p, v, s.eig, 0.0, T, lp.tol_pair);
    CHECK(std::abs(inner_dx(b.p.field_at(0), b.v.field_at(0)) - 1.0) <= 1e-12);
    CHECK(b.pairing_drift <= 1e-12);
    for (auto& [t, d] : convergence_to_phi(b)) CHECK(d <= 1e-10);
}

TEST_CASE("normalization is scale-free in the terminal condition") {
    const auto& s = setup();
    LinearizedParams lp;
    const double T = 5.0;
    BundleLeg v = solve_forward_bundle(s.frozen, s.nl, s.eig, lp, T);
    BundleLeg p1 = solve_adjoint(s.frozen, s.nl, s.eig, lp, T);
    Field big = scaled(s.eig.phi, 2.0);
    BundleLeg p2 = solve_adjoint(s.frozen, s.nl, s.eig, lp, T, &big);

    FloquetBundle b1 = normalize_bundle(p1, v, s.eig, 0.0, T, lp.tol_pair);
    FloquetBundle b2 = normalize_bundle(p2, v, s.eig, 0.0, T, lp.tol_pair);
    CHECK(sup_distance(b1.p.field_at(0), b2.p.field_at(0)) <= 1e-12);
}

TEST_CASE("adjoint terminal condition must be positive") {
    const auto& s = setup();
    LinearizedParams lp;
    Field sign_changing = Field::zeros(s.grid);
    for (int i = 1; i + 1 < s.grid->n(); ++i) sign_changing[i] = s.grid->node(i);
    CHECK_THROWS_AS(solve_adjoint(s.frozen, s.nl, s.eig, lp, 5.0, &sign_changing),
                    std::invalid_argument);
}

TEST_CASE("separation: bundle direction is annihilated, second mode sets the gap") {
    const auto& s = setup();
    LinearizedParams lp;
    const double T = 40.0;
    BundleLeg v = solve_forward_bundle(s.frozen, s.nl, s.eig, lp, T);
    BundleLeg p = solve_adjoint(s.frozen, s.nl, s.eig, lp, T);
    FloquetBundle b = normalize_bundle(p, v, s.eig, 0.0, T, lp.tol_pair);

    SeparationResult self = separation_rate(s.frozen, s.nl, b, b.v.field_at(0), lp);
    CHECK(self.infinite);

    auto [lam2, psi2] = second_eigenpair(s.nl, s.gs.W, s.eig);
    SeparationResult sep = separation_rate(s.frozen, s.nl, b, psi2, lp);
    CHECK_FALSE(sep.infinite);
    CHECK(sep.gamma_fit ==
          doctest::Approx(lam2 - s.eig.lambda).epsilon(5e-3)); // clean rational rate

    // duality: the pairing with the evolved direction is conserved
    auto series = pairing_series(b.p, sep.udot);
    double drift = 0.0;
    for (auto& [t, val] : series) drift = std::max(drift, std::abs(val - series.front().second));
    CHECK(drift <= 1e-10);
}
