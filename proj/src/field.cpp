#include "rdlab/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rdlab {

Field::Field(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("field: null grid");
    if (static_cast<int>(values_.size()) != grid_->n())
        throw std::invalid_argument("field: value count does not match grid");
}

Field Field::zeros(GridPtr grid) {
    int n = grid->n();
    return Field(std::move(grid), std::vector<double>(n, 0.0));
}

Field Field::constant(GridPtr grid, double c) {
    int n = grid->n();
    return Field(std::move(grid), std::vector<double>(n, c));
}

double Field::interp(double x) const {
    const Grid& g = *grid_;
    if (x <= g.x_min()) return values_.front();
    if (x >= g.x_max()) return values_.back();
    int i = g.cell_left_of(x);
    double s = (x - g.node(i)) / g.dx();
    return (1.0 - s) * values_[i] + s * values_[i + 1];
}

void Field::check_finite(const char* what) const {
    for (double v : values_)
        if (!std::isfinite(v))
            throw std::runtime_error(std::string(what) + ": non-finite field value");
}

Norms norms(const Field& f) {
    Norms out;
    double sum1 = 0.0, sum2 = 0.0;
    for (double v : f.values()) {
        out.sup = std::max(out.sup, std::abs(v));
        sum1 += std::abs(v);
        sum2 += v * v;
    }
    double dx = f.grid()->dx();
    out.l1 = dx * sum1;
    out.l2 = std::sqrt(dx * sum2);
    return out;
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

double sup_distance(const Field& a, const Field& b) {
    if (a.size() != b.size()) throw std::invalid_argument("sup_distance: size mismatch");
    double m = 0.0;
    for (int i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double inner_dx(const Field& a, const Field& b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner_dx: size mismatch");
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * a.grid()->dx();
}

double integral_dx(const Field& a) {
    double s = 0.0;
    for (double v : a.values()) s += v;
    return s * a.grid()->dx();
}

double integral_trapezoid(const Field& a) {
    double s = 0.0;
    for (double v : a.values()) s += v;
    s -= 0.5 * (a[0] + a[a.size() - 1]);
    return s * a.grid()->dx();
}

Field lin_comb(double ca, const Field& a, double cb, const Field& b) {
    if (a.size() != b.size()) throw std::invalid_argument("lin_comb: size mismatch");
    std::vector<double> v(a.size());
    for (int i = 0; i < a.size(); ++i) v[i] = ca * a[i] + cb * b[i];
    return Field(a.grid(), std::move(v));
}

Field scaled(const Field& a, double c) {
    std::vector<double> v(a.data());
    for (double& x : v) x *= c;
    return Field(a.grid(), std::move(v));
}

} // namespace rdlab
