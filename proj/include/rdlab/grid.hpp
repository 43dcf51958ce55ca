#pragma once

#include <memory>
#include <string>

namespace rdlab {

/// Boundary handling for the 3-point Laplacian.
/// dirichlet_zero pins u = 0 at both end nodes; neumann_zero uses mirror ghosts.
enum class Bc { dirichlet_zero, neumann_zero };

std::string to_string(Bc bc);
Bc bc_from_string(const std::string& s);

/// Uniform 1D mesh on [x_min, x_max] with n nodes, x_i = x_min + i*dx.
class Grid {
public:
    Grid(double x_min, double x_max, int n, Bc bc);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    int n() const { return n_; }
    Bc bc() const { return bc_; }
    double dx() const { return dx_; }

    double node(int i) const { return x_min_ + i * dx_; }

    /// Largest i with node(i) <= x, clamped to [0, n-2].
    int cell_left_of(double x) const;

    bool same_mesh(const Grid& other) const;

private:
    double x_min_;
    double x_max_;
    int n_;
    Bc bc_;
    double dx_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(double x_min, double x_max, int n, Bc bc);

/// Symmetric mesh [-x_max, x_max]. n should be odd so that x = 0 is a node.
GridPtr symmetric_grid(double x_max, int n, Bc bc);

/// Same spacing, domain stretched to [2*x_min, 2*x_max], node count 2(n-1)+1.
/// Original nodes are an exact subset of the result.
GridPtr doubled_grid(const Grid& g);

} // namespace rdlab
