#include "rdlab/csvio.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

namespace rdlab {

namespace {

struct FileGuard {
    std::FILE* f;
    explicit FileGuard(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
        if (!f) throw std::invalid_argument("cannot open for writing: " + path);
    }
    ~FileGuard() {
        if (f) std::fclose(f);
    }
};

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> out;
    const char* p = line.c_str();
    char* end = nullptr;
    while (*p) {
        double v = std::strtod(p, &end);
        if (end == p) break;
        out.push_back(v);
        p = end;
        while (*p == ',' || *p == ' ' || *p == '\t') ++p;
    }
    return out;
}

struct ParsedCsv {
    std::map<std::string, std::string> header; // "file.*" keys only
    std::vector<std::vector<double>> rows;
};

ParsedCsv parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open: " + path);
    ParsedCsv out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            size_t a = body.find_first_not_of(' ');
            if (a == std::string::npos) continue;
            body = body.substr(a);
            if (body.rfind("file.", 0) != 0) continue;
            size_t eq = body.find('=');
            if (eq == std::string::npos) continue;
            out.header[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        std::vector<double> row = parse_row(line);
        if (!row.empty()) out.rows.push_back(std::move(row));
    }
    return out;
}

GridPtr grid_from_header(const std::map<std::string, std::string>& h) {
    auto need = [&](const char* k) -> const std::string& {
        auto it = h.find(k);
        if (it == h.end())
            throw std::invalid_argument(std::string("csv header missing ") + k);
        return it->second;
    };
    return make_grid(std::strtod(need("file.grid.x_min").c_str(), nullptr),
                     std::strtod(need("file.grid.x_max").c_str(), nullptr),
                     std::atoi(need("file.grid.n").c_str()),
                     bc_from_string(need("file.grid.bc")));
}

void write_grid_header(std::FILE* f, const Grid& g) {
    std::fprintf(f, "# file.grid.x_min=%s\n", fmt_double(g.x_min()).c_str());
    std::fprintf(f, "# file.grid.x_max=%s\n", fmt_double(g.x_max()).c_str());
    std::fprintf(f, "# file.grid.n=%d\n", g.n());
    std::fprintf(f, "# file.grid.bc=%s\n", to_string(g.bc()).c_str());
}

} // namespace

void write_field_csv(const std::string& path, const Field& f, const Manifest& manifest) {
    FileGuard out(path);
    manifest.write_header(out.f);
    std::fprintf(out.f, "# file.kind=field\n");
    write_grid_header(out.f, *f.grid());
    std::fprintf(out.f, "# columns: x,value\n");
    for (int i = 0; i < f.size(); ++i)
        std::fprintf(out.f, "%s,%s\n", fmt_double(f.grid()->node(i)).c_str(),
                     fmt_double(f[i]).c_str());
}

Field read_field_csv(const std::string& path) {
    ParsedCsv csv = parse_csv(path);
    if (csv.rows.empty()) throw std::invalid_argument("field csv has no data: " + path);
    GridPtr grid;
    if (csv.header.count("file.grid.n")) {
        grid = grid_from_header(csv.header);
    } else {
        int n = static_cast<int>(csv.rows.size());
        grid = make_grid(csv.rows.front().at(0), csv.rows.back().at(0), n,
                         Bc::dirichlet_zero);
    }
    if (static_cast<int>(csv.rows.size()) != grid->n())
        throw std::invalid_argument("field csv row count does not match grid: " + path);
    std::vector<double> v(grid->n());
    for (int i = 0; i < grid->n(); ++i) {
        if (csv.rows[i].size() < 2)
            throw std::invalid_argument("field csv row needs x,value: " + path);
        if (std::abs(csv.rows[i][0] - grid->node(i)) > 1e-9 * (1.0 + std::abs(grid->node(i))))
            throw std::invalid_argument("field csv nodes disagree with grid: " + path);
        v[i] = csv.rows[i][1];
    }
    return Field(std::move(grid), std::move(v));
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const Manifest& manifest) {
    traj.validate();
    FileGuard out(path);
    manifest.write_header(out.f);
    std::fprintf(out.f, "# file.kind=trajectory\n");
    write_grid_header(out.f, *traj.grid);
    if (traj.splice_time)
        std::fprintf(out.f, "# file.splice_time=%s\n", fmt_double(*traj.splice_time).c_str());
    if (traj.steady_state) {
        std::fprintf(out.f, "# file.steady_state=");
        for (int i = 0; i < traj.steady_state->size(); ++i)
            std::fprintf(out.f, "%s%s", i ? "," : "",
                         fmt_double((*traj.steady_state)[i]).c_str());
        std::fprintf(out.f, "\n");
    }
    std::fprintf(out.f, "# columns: t,u(x_0),...,u(x_{n-1})\n");
    for (int k = 0; k < traj.size(); ++k) {
        std::fprintf(out.f, "%s", fmt_double(traj.times[k]).c_str());
        const Field& f = traj.fields[k];
        for (int i = 0; i < f.size(); ++i)
            std::fprintf(out.f, ",%s", fmt_double(f[i]).c_str());
        std::fprintf(out.f, "\n");
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    ParsedCsv csv = parse_csv(path);
    Trajectory traj;
    traj.grid = grid_from_header(csv.header);
    int n = traj.grid->n();
    for (const auto& row : csv.rows) {
        if (static_cast<int>(row.size()) != n + 1)
            throw std::invalid_argument("trajectory csv row has wrong width: " + path);
        traj.times.push_back(row[0]);
        traj.fields.emplace_back(traj.grid,
                                 std::vector<double>(row.begin() + 1, row.end()));
    }
    if (auto it = csv.header.find("file.splice_time"); it != csv.header.end())
        traj.splice_time = std::strtod(it->second.c_str(), nullptr);
    if (auto it = csv.header.find("file.steady_state"); it != csv.header.end()) {
        std::vector<double> w = parse_row(it->second);
        if (static_cast<int>(w.size()) != n)
            throw std::invalid_argument("trajectory csv steady state has wrong width");
        traj.steady_state = Field(traj.grid, std::move(w));
    }
    traj.validate();
    return traj;
}

} // namespace rdlab
