#include "rdlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdlab {

std::string to_string(Bc bc) {
    return bc == Bc::dirichlet_zero ? "dirichlet_zero" : "neumann_zero";
}

Bc bc_from_string(const std::string& s) {
    if (s == "dirichlet_zero") return Bc::dirichlet_zero;
    if (s == "neumann_zero") return Bc::neumann_zero;
    throw std::invalid_argument("unknown boundary condition: " + s);
}

Grid::Grid(double x_min, double x_max, int n, Bc bc)
    : x_min_(x_min), x_max_(x_max), n_(n), bc_(bc) {
    if (!(x_min < x_max)) throw std::invalid_argument("grid: x_min must be < x_max");
    if (n < 3) throw std::invalid_argument("grid: need at least 3 nodes");
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw std::invalid_argument("grid: non-finite bounds");
    dx_ = (x_max - x_min) / (n - 1);
    if (!(dx_ > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
}

int Grid::cell_left_of(double x) const {
    int i = static_cast<int>(std::floor((x - x_min_) / dx_));
    return std::clamp(i, 0, n_ - 2);
}

bool Grid::same_mesh(const Grid& other) const {
    return x_min_ == other.x_min_ && x_max_ == other.x_max_ && n_ == other.n_ &&
           bc_ == other.bc_;
}

GridPtr make_grid(double x_min, double x_max, int n, Bc bc) {
    return std::make_shared<const Grid>(x_min, x_max, n, bc);
}

GridPtr symmetric_grid(double x_max, int n, Bc bc) {
    return make_grid(-x_max, x_max, n, bc);
}

GridPtr doubled_grid(const Grid& g) {
    return make_grid(2.0 * g.x_min(), 2.0 * g.x_max(), 2 * (g.n() - 1) + 1, g.bc());
}

} // namespace rdlab
