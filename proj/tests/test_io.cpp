#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rdlab/csvio.hpp"
#include "rdlab/forward.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace rdlab;

namespace {

std::string tmp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("config precedence and validation") {
    Config cfg = Config::defaults();
    CHECK(cfg.get_double("nonlinearity.a") == 0.3);
    CHECK(cfg.entries().at("nonlinearity.a").second == "default");

    std::string path = tmp_path("rdlab_cfg_test.txt");
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "nonlinearity.a = 0.25\n";
        out << "grid.n=801   # trailing comment\n";
    }
    cfg.load_file(path);
    CHECK(cfg.get_double("nonlinearity.a") == 0.25);
    CHECK(cfg.entries().at("nonlinearity.a").second == "file");

    cfg.set("nonlinearity.a", "0.2");
    CHECK(cfg.get_double("nonlinearity.a") == 0.2);
    CHECK(cfg.entries().at("nonlinearity.a").second == "flag");

    CHECK_THROWS_AS(cfg.set("no.such.key", "1"), std::invalid_argument);
    {
        std::ofstream out(path);
        out << "mystery.key=1\n";
    }
    CHECK_THROWS_AS(cfg.load_file(path), std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("field csv round trip") {
    auto g = symmetric_grid(5.0, 201, Bc::dirichlet_zero);
    Field f = Field::zeros(g);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int i = 0; i < f.size(); ++i) f[i] = dist(rng);

    Manifest m;
    m.add("test", "field-roundtrip");
    std::string path = tmp_path("rdlab_field_test.csv");
    write_field_csv(path, f, m);
    Field back = read_field_csv(path);
    REQUIRE(back.size() == f.size());
    CHECK(back.grid()->same_mesh(*g));
    for (int i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]); // %.17g round-trips bitwise
    std::remove(path.c_str());
}

TEST_CASE("trajectory csv round trip with splice metadata") {
    auto nl = Nonlinearity::cubic(0.3);
    auto g = symmetric_grid(10.0, 201, Bc::dirichlet_zero);
    SolverParams sp;
    sp.T_max = 1.0;
    Field u0 = Field::zeros(g);
    for (int i = 0; i < g->n(); ++i)
        u0[i] = 0.4 * std::exp(-g->node(i) * g->node(i));
    u0[0] = u0[g->n() - 1] = 0.0;
    Trajectory t = evolve(nl, u0, sp);
    t.splice_time = t.t_last();
    t.steady_state = t.fields.back();

    Manifest m;
    m.add("test", "trajectory-roundtrip");
    std::string path = tmp_path("rdlab_traj_test.csv");
    write_trajectory_csv(path, t, m);
    Trajectory back = read_trajectory_csv(path);
    REQUIRE(back.size() == t.size());
    CHECK(back.spliced());
    CHECK(*back.splice_time == *t.splice_time);
    for (int k = 0; k < t.size(); ++k) {
        CHECK(back.times[k] == t.times[k]);
        CHECK(sup_distance(back.fields[k], t.fields[k]) == 0.0);
    }
    CHECK(sup_distance(*back.steady_state, *t.steady_state) == 0.0);

    // determinism: a second write is byte-identical
    std::string path2 = tmp_path("rdlab_traj_test2.csv");
    write_trajectory_csv(path2, t, m);
    CHECK(slurp(path) == slurp(path2));
    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("file digest is content-stable") {
    std::string path = tmp_path("rdlab_digest_test.txt");
    {
        std::ofstream out(path);
        out << "fixed bytes";
    }
    std::string d1 = file_digest(path);
    std::string d2 = file_digest(path);
    CHECK(d1 == d2);
    CHECK(d1.size() == 16);
    {
        std::ofstream out(path);
        out << "different bytes";
    }
    CHECK(file_digest(path) != d1);
    std::remove(path.c_str());
}
