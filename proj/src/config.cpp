#include "rdlab/config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace rdlab {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

Config Config::defaults() {
    Config c;
    auto d = [&](const char* k, const char* v) { c.assign(k, v, "default"); };
    d("nonlinearity.a", "0.3");
    d("grid.x_max", "40");
    d("grid.n", "1601");
    d("grid.bc", "dirichlet_zero");
    d("solver.dt", "0.005");
    d("solver.T_max", "400");
    d("solver.store_stride", "20");
    d("solver.scheme", "imex_cn");
    d("fate.delta", "0.1");
    d("fate.alpha_inv", "0");  // 0 -> (beta*+1)/2
    d("fate.R_inv", "0");      // 0 -> calibrate
    d("threshold.tol_L", "0"); // 0 -> 1e-6 * x_max
    d("threshold.L_init", "1.0");
    d("threshold.L_cap", "0"); // 0 -> half the domain span
    d("threshold.tol_W", "0.001");
    d("threshold.mid_stride", "10");
    d("floquet.efolds", "40");
    d("floquet.tol_pair", "1e-6");
    d("bathtub.fp_tol", "0.005");
    d("bathtub.kkt_tol", "0.01");
    d("bathtub.max_outer", "12");
    return c;
}

void Config::assign(const std::string& key, const std::string& value,
                    const std::string& provenance) {
    values_[key] = {value, provenance};
}

void Config::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: " + path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!values_.count(key))
            throw std::invalid_argument("config: unknown key '" + key + "' in " + path);
        assign(key, value, "file");
    }
}

void Config::set(const std::string& key, const std::string& value) {
    if (!values_.count(key))
        throw std::invalid_argument("config: unknown key '" + key + "'");
    assign(key, value, "flag");
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

double Config::get_double(const std::string& key) const {
    const std::string& s = get_string(key);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::invalid_argument("config: key '" + key + "' is not a number: " + s);
    return v;
}

int Config::get_int(const std::string& key) const {
    double v = get_double(key);
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw std::invalid_argument("config: key '" + key + "' is not an integer");
    return i;
}

const std::string& Config::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::invalid_argument("config: unknown key '" + key + "'");
    return it->second.first;
}

} // namespace rdlab
