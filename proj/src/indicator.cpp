#include "rdlab/indicator.hpp"

#include <algorithm>
#include <stdexcept>

namespace rdlab {

Field indicator_datum(GridPtr grid,
                      const std::vector<std::pair<double, double>>& intervals,
                      double amplitude) {
    for (const auto& [a, b] : intervals)
        if (!(a <= b)) throw std::invalid_argument("indicator_datum: empty interval");

    const Grid& g = *grid;
    Field out = Field::zeros(grid);
    double h = 0.5 * g.dx();
    for (int i = 0; i < g.n(); ++i) {
        double lo = std::max(g.x_min(), g.node(i) - h);
        double hi = std::min(g.x_max(), g.node(i) + h);
        double covered = 0.0;
        for (const auto& [a, b] : intervals)
            covered += std::max(0.0, std::min(hi, b) - std::max(lo, a));
        out[i] = amplitude * covered / (hi - lo);
    }
    return out;
}

} // namespace rdlab
