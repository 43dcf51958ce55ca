#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rdlab/field.hpp"
#include "rdlab/indicator.hpp"
#include "rdlab/nonlinearity.hpp"
#include "rdlab/trajectory.hpp"

#include <cmath>
#include <random>

using namespace rdlab;

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(1.0, 1.0, 11, Bc::dirichlet_zero), std::invalid_argument);
    CHECK_THROWS_AS(Grid(2.0, 1.0, 11, Bc::dirichlet_zero), std::invalid_argument);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 2, Bc::dirichlet_zero), std::invalid_argument);

    Grid g(-40.0, 40.0, 1601, Bc::dirichlet_zero);
    CHECK(g.dx() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(g.node(0) == -40.0);
    CHECK(g.node(1600) == doctest::Approx(40.0).epsilon(1e-15));

    auto d = doubled_grid(g);
    CHECK(d->n() == 3201);
    CHECK(d->dx() == doctest::Approx(g.dx()).epsilon(1e-15));
    // original nodes are a subset
    CHECK(d->node(800) == doctest::Approx(g.node(0)).epsilon(1e-14));
}

TEST_CASE("cubic nonlinearity basics") {
    auto nl = Nonlinearity::cubic(0.3);
    CHECK(nl.theta() == 0.3);
    CHECK(nl.beta_star() == doctest::Approx(0.47794).epsilon(1e-4));
    // direct arithmetic: f(0.5) = 0.5*0.5*0.2
    CHECK(nl.f0(0.5) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(nl.f0(0.0) == 0.0);
    CHECK(nl.f0(1.0) == 0.0);
    CHECK(nl.fp0(0.0) == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(nl.fp0(1.0) < 0.0);
    CHECK(nl.bistable());

    CHECK_THROWS_AS(Nonlinearity::cubic(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::cubic(0.5), std::invalid_argument);
    CHECK_THROWS_AS(Nonlinearity::cubic(-0.1), std::invalid_argument);
}

TEST_CASE("beta* root and primitive across the a-range") {
    for (double a : {0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.49}) {
        auto nl = Nonlinearity::cubic(a);
        double beta = nl.beta_star();
        CHECK(beta > a);
        CHECK(beta < 1.0);
        // closed-form quartic primitive vanishes at beta*
        CHECK(std::abs(nl.primitive(beta)) <= 1e-12);
        // root of 3b^2 - 4(1+a)b + 6a
        CHECK(3.0 * beta * beta - 4.0 * (1.0 + a) * beta + 6.0 * a ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("eval band policing") {
    auto nl = Nonlinearity::cubic(0.3);
    CHECK_NOTHROW(nl.f0(-0.05));
    CHECK_NOTHROW(nl.f0(1.05));
    CHECK_THROWS_AS(nl.f0(1.5), std::domain_error);
    CHECK_THROWS_AS(nl.f0(-0.5), std::domain_error);
}

TEST_CASE("custom table nonlinearity") {
    auto cub = Nonlinearity::cubic(0.3);
    std::vector<double> u, f, fp;
    for (int i = 0; i <= 1200; ++i) { // knots include u = 0 and u = 1 exactly
        double x = -0.1 + i * 0.001;
        u.push_back(x);
        f.push_back(cub.f0(x));
        fp.push_back(cub.fp0(x));
    }
    auto nl = Nonlinearity::custom(u, f, fp);
    CHECK(nl.bistable());
    CHECK(nl.theta() == doctest::Approx(0.3).epsilon(1e-5));
    CHECK(nl.beta_star() == doctest::Approx(cub.beta_star()).epsilon(1e-4));

    // zero reaction: rejected as bistable, accepted as plumbing
    std::vector<double> zero(u.size(), 0.0);
    CHECK_THROWS_AS(Nonlinearity::custom(u, zero, zero), std::invalid_argument);
    auto plumbing = Nonlinearity::custom(u, zero, zero, false);
    CHECK_FALSE(plumbing.bistable());
    CHECK_THROWS_AS(plumbing.theta(), std::logic_error);
    CHECK(plumbing.f0(0.37) == 0.0);
}

TEST_CASE("heterogeneity multiplier") {
    auto nl = Nonlinearity::cubic(0.3);
    auto het = nl.with_heterogeneity([](double x) { return 0.5 * std::cos(x); }, -0.5);
    CHECK_FALSE(het.homogeneous());
    CHECK(het.f(0.0, 0.5) == doctest::Approx(1.5 * nl.f0(0.5)).epsilon(1e-14));
    // zeros at u = 0, 1 survive any multiplier
    CHECK(het.f(1.234, 0.0) == 0.0);
    CHECK(het.f(1.234, 1.0) == 0.0);
    CHECK_THROWS_AS(nl.with_heterogeneity([](double) { return -2.0; }, -2.0),
                    std::invalid_argument);
}

TEST_CASE("norms on reference fields") {
    auto g = make_grid(0.0, 10.0, 201, Bc::dirichlet_zero);
    Norms z = norms(Field::zeros(g));
    CHECK(z.sup == 0.0);
    CHECK(z.l1 == 0.0);
    CHECK(z.l2 == 0.0);

    Norms ones = norms(Field::constant(g, 1.0));
    CHECK(ones.sup == 1.0);
    CHECK(std::abs(ones.l1 - 10.0) <= 2.0 * g->dx()); // rectangle rule on the unit constant

    Field spike = Field::zeros(g);
    spike[100] = 1.0;
    CHECK(norms(spike).l1 == doctest::Approx(g->dx()).epsilon(1e-15));
}

TEST_CASE("norm axioms on random fields") {
    auto g = make_grid(-5.0, 5.0, 101, Bc::dirichlet_zero);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
        Field x = Field::zeros(g), y = Field::zeros(g);
        for (int i = 0; i < g->n(); ++i) {
            x[i] = dist(rng);
            y[i] = dist(rng);
        }
        double alpha = 3.7 * dist(rng);
        Norms nx = norms(x), ny = norms(y);
        Norms nax = norms(scaled(x, alpha));
        CHECK(nax.sup == doctest::Approx(std::abs(alpha) * nx.sup).epsilon(1e-12));
        CHECK(nax.l1 == doctest::Approx(std::abs(alpha) * nx.l1).epsilon(1e-12));
        CHECK(nax.l2 == doctest::Approx(std::abs(alpha) * nx.l2).epsilon(1e-12));
        Norms nxy = norms(lin_comb(1.0, x, 1.0, y));
        CHECK(nxy.sup <= nx.sup + ny.sup + 1e-12);
        CHECK(nxy.l1 <= nx.l1 + ny.l1 + 1e-12);
        CHECK(nxy.l2 <= nx.l2 + ny.l2 + 1e-12);
    }
}

TEST_CASE("indicator datum partial cells") {
    auto g = make_grid(-10.0, 10.0, 401, Bc::dirichlet_zero);
    // off-node endpoints: mass is exact, values stay in [0,1]
    Field d = indicator_datum(g, {{-1.234, 2.789}});
    CHECK(integral_dx(d) == doctest::Approx(2.789 + 1.234).epsilon(1e-12));
    for (int i = 0; i < d.size(); ++i) {
        CHECK(d[i] >= 0.0);
        CHECK(d[i] <= 1.0);
    }
    // nodewise monotone in the interval
    Field d2 = indicator_datum(g, {{-1.3, 2.9}});
    for (int i = 0; i < d.size(); ++i) CHECK(d2[i] >= d[i] - 1e-15);
    // amplitude scaling
    Field half = indicator_datum(g, {{-1.0, 1.0}}, 0.5);
    CHECK(sup_norm(half) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("trajectory bookkeeping") {
    auto g = make_grid(0.0, 1.0, 11, Bc::dirichlet_zero);
    Trajectory t;
    t.grid = g;
    t.times = {0.0, 1.0};
    t.fields = {Field::constant(g, 0.25), Field::constant(g, 0.75)};
    t.validate();
    CHECK(t.sample(0.5)[5] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t.sample(1.0)[5] == 0.75);
    CHECK_THROWS_AS(t.sample(2.0), std::out_of_range);

    t.splice_time = 1.0;
    CHECK_THROWS_AS(t.validate(), std::logic_error); // splice without steady state
    t.steady_state = Field::constant(g, 0.9);
    t.validate();
    CHECK(t.sample(5.0)[3] == 0.9);

    Trajectory bad = t;
    bad.times = {1.0, 0.5};
    CHECK_THROWS_AS(bad.validate(), std::logic_error);
}
