#pragma once

#include "rdlab/grid.hpp"

#include <span>
#include <vector>

namespace rdlab {

/// One spatial profile sampled on a grid. Treated as immutable once handed off;
/// mutation is confined to construction sites and solver internals.
class Field {
public:
    Field() = default;
    Field(GridPtr grid, std::vector<double> values);

    static Field zeros(GridPtr grid);
    static Field constant(GridPtr grid, double c);

    const GridPtr& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    double& operator[](int i) { return values_[i]; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& data() { return values_; }
    const std::vector<double>& data() const { return values_; }

    /// Piecewise-linear interpolation at x, clamped to the domain.
    double interp(double x) const;

    /// Throws if any value is non-finite.
    void check_finite(const char* what) const;

private:
    GridPtr grid_;
    std::vector<double> values_;
};

struct Norms {
    double sup = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
};

/// Rectangle-rule norms: sup = max|v|, l1 = dx*sum|v|, l2 = sqrt(dx*sum v^2).
/// The rectangle rule (full dx weight at every node) is used consistently for
/// all integrals in this project so that discrete adjointness identities hold
/// with the same quadrature.
Norms norms(const Field& f);

double sup_norm(const Field& f);
double sup_distance(const Field& a, const Field& b);

/// dx * sum a_i * b_i (rectangle-rule pairing).
double inner_dx(const Field& a, const Field& b);

/// dx * sum a_i (signed rectangle-rule integral).
double integral_dx(const Field& a);

/// Trapezoid variant: half weights at the two end nodes.
double integral_trapezoid(const Field& a);

/// ca*a + cb*b on a shared grid.
Field lin_comb(double ca, const Field& a, double cb, const Field& b);

Field scaled(const Field& a, double c);

} // namespace rdlab
