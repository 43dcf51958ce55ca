#pragma once

#include "rdlab/pipelines.hpp"
#include "rdlab/trajectory.hpp"

#include <string>

namespace rdlab {

/// Two-column CSV "x,value" with '#' manifest header.
void write_field_csv(const std::string& path, const Field& f, const Manifest& manifest);

/// Reads a two-column field file; the grid is reconstructed from the nodes
/// (boundary condition from the header when present, dirichlet_zero else).
Field read_field_csv(const std::string& path);

/// Rows "t,u(x_0),...,u(x_{n-1})" with '#' header carrying the grid, the
/// splice time and the steady-state row when present.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const Manifest& manifest);

Trajectory read_trajectory_csv(const std::string& path);

} // namespace rdlab
