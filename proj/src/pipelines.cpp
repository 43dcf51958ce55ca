#include "rdlab/pipelines.hpp"

#include <cinttypes>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace rdlab {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void Manifest::add(const std::string& key, const std::string& value) {
    rows.emplace_back(key, value);
}

void Manifest::add_double(const std::string& key, double value) {
    rows.emplace_back(key, fmt_double(value));
}

Manifest Manifest::from_config(const Config& cfg) {
    Manifest m;
    m.add("tool", std::string("rdlab ") + kToolVersion);
    for (const auto& [key, vp] : cfg.entries())
        m.add(key, vp.first + " (" + vp.second + ")");
    return m;
}

void Manifest::write_header(std::FILE* f) const {
    for (const auto& [k, v] : rows) std::fprintf(f, "# %s=%s\n", k.c_str(), v.c_str());
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("digest: cannot open " + path);
    uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

Lab Lab::make(const Config& cfg) {
    Lab lab;
    lab.cfg = cfg;
    lab.nl = Nonlinearity::cubic(cfg.get_double("nonlinearity.a"));

    double x_max = cfg.get_double("grid.x_max");
    lab.grid = symmetric_grid(x_max, cfg.get_int("grid.n"),
                              bc_from_string(cfg.get_string("grid.bc")));

    lab.solver.dt = cfg.get_double("solver.dt");
    lab.solver.T_max = cfg.get_double("solver.T_max");
    lab.solver.store_stride = cfg.get_int("solver.store_stride");
    lab.solver.scheme = scheme_from_string(cfg.get_string("solver.scheme"));
    lab.solver.validate(lab.nl);

    double delta = cfg.get_double("fate.delta");
    double alpha = cfg.get_double("fate.alpha_inv");
    double R = cfg.get_double("fate.R_inv");
    if (alpha > 0.0 && R > 0.0) {
        lab.fate.delta = delta;
        lab.fate.alpha_inv = alpha;
        lab.fate.R_inv = R;
    } else {
        lab.fate = calibrate_invasion_box(
            lab.nl, lab.grid, lab.solver, delta,
            alpha > 0.0 ? std::optional<double>(alpha) : std::nullopt);
    }

    lab.gs = ground_state(lab.nl, lab.grid);
    lab.eig = principal_eigenpair(lab.nl, lab.gs.W);

    lab.thr.tol_L = cfg.get_double("threshold.tol_L"); // 0 -> resolved in module
    lab.thr.L_init = cfg.get_double("threshold.L_init");
    lab.thr.L_cap = cfg.get_double("threshold.L_cap");
    lab.thr.tol_W = cfg.get_double("threshold.tol_W");
    lab.thr.mid_store_stride = cfg.get_int("threshold.mid_stride");
    lab.thr.solver = lab.solver;
    lab.thr.fate = lab.fate;

    lab.lin.dt = lab.solver.dt;
    lab.lin.store_stride = lab.solver.store_stride;
    lab.lin.scheme = lab.solver.scheme;
    lab.lin.efolds = cfg.get_double("floquet.efolds");
    lab.lin.tol_pair = cfg.get_double("floquet.tol_pair");
    return lab;
}

AppContext Lab::app() const { return AppContext{nl, grid, gs, eig, thr, lin}; }

Manifest Lab::manifest() const {
    Manifest m = Manifest::from_config(cfg);
    m.add_double("resolved.beta_star", nl.beta_star());
    m.add_double("resolved.theta", nl.theta());
    m.add_double("resolved.lambda", eig.lambda);
    m.add_double("resolved.fate.alpha_inv", fate.alpha_inv);
    m.add_double("resolved.fate.R_inv", fate.R_inv);
    return m;
}

} // namespace rdlab
