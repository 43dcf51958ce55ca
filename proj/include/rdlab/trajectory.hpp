#pragma once

#include "rdlab/field.hpp"

#include <optional>
#include <vector>

namespace rdlab {

/// Time-stamped sequence of fields, optionally spliced onto a steady state:
/// for t >= splice_time the solution is defined to equal steady_state exactly,
/// so no fields need to be stored past the splice.
struct Trajectory {
    GridPtr grid;
    std::vector<double> times;
    std::vector<Field> fields;
    std::optional<double> splice_time;
    std::optional<Field> steady_state;

    int size() const { return static_cast<int>(times.size()); }
    double t_begin() const { return times.front(); }
    /// Last stored time; a spliced trajectory is defined for all t beyond it.
    double t_last() const { return times.back(); }
    bool spliced() const { return splice_time.has_value(); }

    /// Solution at time t: exact at stored stamps, linear interpolation in
    /// time between them, steady_state for t >= splice_time.
    Field sample(double t) const;

    /// Index of the last stored time <= t.
    int index_at_or_before(double t) const;

    void validate() const;
};

} // namespace rdlab
