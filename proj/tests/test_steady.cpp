#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rdlab/errors.hpp"
#include "rdlab/steady.hpp"

#include <cmath>
#include <random>

using namespace rdlab;

namespace {

struct Setup {
    Nonlinearity nl = Nonlinearity::cubic(0.3);
    GridPtr grid = symmetric_grid(40.0, 1601, Bc::dirichlet_zero);
    GroundState gs = ground_state(nl, grid);
    EigenPair eig = principal_eigenpair(nl, gs.W);
};

const Setup& setup() {
    static Setup s;
    return s;
}

} // namespace

TEST_CASE("ground state profile") {
    const auto& s = setup();
    const Field& W = s.gs.W;
    int mid = (s.grid->n() - 1) / 2;

    // peak value is beta* (zero-energy first integral)
    CHECK(W[mid] == doctest::Approx(s.nl.beta_star()).epsilon(1e-12));

    // even by construction, to the bit
    for (int i = 0; i <= mid; ++i) CHECK(W[i] == W[s.grid->n() - 1 - i]);

    // strictly decreasing in |x|
    for (int i = mid; i + 1 < s.grid->n(); ++i) CHECK(W[i + 1] < W[i]);

    // linearized tail: W(x)/W(x+1) -> e^{sqrt(a)}
    double ratio = W.interp(35.0) / W.interp(36.0);
    CHECK(ratio == doctest::Approx(std::exp(std::sqrt(0.3))).epsilon(1e-4));
    CHECK(s.gs.decay_rate == doctest::Approx(std::sqrt(0.3)).epsilon(1e-14));
}

TEST_CASE("ground state residual is second order") {
    const auto& s = setup();
    double res1 = pde_residual_sup(s.nl, s.gs.W);
    CHECK(res1 <= 1e-3);
    auto fine = symmetric_grid(40.0, 3201, Bc::dirichlet_zero);
    double res2 = pde_residual_sup(s.nl, ground_state(s.nl, fine).W);
    CHECK(res2 <= 0.32 * res1);
}

TEST_CASE("newton-refined state agrees with the quadrature profile") {
    const auto& s = setup();
    // the discrete BVP fixed point sits O(dx^2) from the continuum profile
    Field refined = ground_state_newton(s.nl, s.gs.W);
    CHECK(sup_distance(refined, s.gs.W) <= 2e-5);
    CHECK(pde_residual_sup(s.nl, refined) <= 1e-12);

    // on a grid fine enough for its constant the two routes agree to 1e-6
    auto fine = symmetric_grid(40.0, 6401, Bc::dirichlet_zero);
    GroundState gs_fine = ground_state(s.nl, fine);
    Field refined_fine = ground_state_newton(s.nl, gs_fine.W);
    CHECK(sup_distance(refined_fine, gs_fine.W) <= 1e-6);
}

TEST_CASE("heterogeneous path goes through newton") {
    const auto& s = setup();
    CHECK_THROWS_AS(
        ground_state(s.nl.with_heterogeneity([](double) { return 0.1; }, 0.0), s.grid),
        std::invalid_argument);
    // mild heterogeneity, seeded at the homogeneous state
    auto het = s.nl.with_heterogeneity(
        [](double x) { return 0.05 * std::exp(-x * x / 16.0); }, 0.0);
    Field W_het = ground_state_newton(het, s.gs.W);
    CHECK(pde_residual_sup(het, W_het) <= 1e-10);
    CHECK(sup_distance(W_het, s.gs.W) > 1e-4); // it is a genuinely different state
}

TEST_CASE("principal eigenpair") {
    const auto& s = setup();
    CHECK(s.eig.lambda < -0.01); // strict instability with margin

    // sup-normalized positive eigenvector
    CHECK(sup_norm(s.eig.phi) == doctest::Approx(1.0).epsilon(1e-14));
    for (int i = 1; i + 1 < s.grid->n(); ++i) CHECK(s.eig.phi[i] > 0.0);

    // two routes to lambda agree
    double rq = rayleigh_quotient(s.nl, s.gs.W, s.eig.phi);
    CHECK(std::abs(rq - s.eig.lambda) <= 1e-8);
}

TEST_CASE("derivative of W is a near-null vector") {
    const auto& s = setup();
    Field dW = centered_derivative(s.gs.W);
    Field AdW = apply_linearized_operator(s.nl, s.gs.W, dW);
    double dx = s.grid->dx();
    CHECK(norms(AdW).l2 / norms(dW).l2 <= 5.0 * dx * dx);
    // rayleigh at the near-null vector: above lambda, close to zero
    double rq = rayleigh_quotient(s.nl, s.gs.W, dW);
    CHECK(rq >= s.eig.lambda - 1e-8);
    CHECK(std::abs(rq) <= 1e-3);
}

TEST_CASE("rayleigh quotient is a variational upper bound") {
    const auto& s = setup();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Field psi = Field::zeros(s.grid);
        for (int i = 1; i + 1 < s.grid->n(); ++i) psi[i] = dist(rng);
        CHECK(rayleigh_quotient(s.nl, s.gs.W, psi) >= s.eig.lambda - 1e-8);
    }
    CHECK_THROWS_AS(rayleigh_quotient(s.nl, s.gs.W, Field::zeros(s.grid)),
                    std::invalid_argument);
}

TEST_CASE("second eigenpair sits at the translation mode") {
    const auto& s = setup();
    auto [lam2, psi2] = second_eigenpair(s.nl, s.gs.W, s.eig);
    CHECK(std::abs(lam2) <= 5e-3);        // discrete zero mode
    CHECK(lam2 - s.eig.lambda > 0.1);     // clean spectral gap
    // odd symmetry of the translation mode
    int n = s.grid->n();
    double odd_defect = 0.0;
    for (int i = 0; i < n; ++i)
        odd_defect = std::max(odd_defect, std::abs(psi2[i] + psi2[n - 1 - i]));
    CHECK(odd_defect <= 1e-6);
}
