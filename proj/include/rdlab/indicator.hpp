#pragma once

#include "rdlab/field.hpp"

#include <utility>
#include <vector>

namespace rdlab {

/// amplitude * indicator of a union of intervals, discretized with
/// partial-cell weighting: node i owns the cell [x_i - dx/2, x_i + dx/2]
/// (clipped to the domain) and receives the covered fraction of that cell.
/// This makes the datum continuous in the interval endpoints, so thresholds
/// are well defined below the mesh resolution.
Field indicator_datum(GridPtr grid,
                      const std::vector<std::pair<double, double>>& intervals,
                      double amplitude = 1.0);

} // namespace rdlab
