#include "rdlab/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace rdlab {

int Trajectory::index_at_or_before(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) throw std::out_of_range("trajectory: time before start");
    return static_cast<int>(it - times.begin()) - 1;
}

Field Trajectory::sample(double t) const {
    if (splice_time && t >= *splice_time) {
        if (!steady_state) throw std::logic_error("trajectory: splice without steady state");
        return *steady_state;
    }
    if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
        throw std::out_of_range("trajectory: time outside stored range");
    t = std::clamp(t, times.front(), times.back());
    int k = index_at_or_before(t);
    if (k == size() - 1 || times[k] == t) return fields[k];
    double s = (t - times[k]) / (times[k + 1] - times[k]);
    return lin_comb(1.0 - s, fields[k], s, fields[k + 1]);
}

void Trajectory::validate() const {
    if (times.size() != fields.size())
        throw std::logic_error("trajectory: times/fields length mismatch");
    if (times.empty()) throw std::logic_error("trajectory: empty");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::logic_error("trajectory: times must be strictly increasing");
    for (const Field& f : fields)
        if (f.grid().get() != grid.get() && !f.grid()->same_mesh(*grid))
            throw std::logic_error("trajectory: field on a different grid");
    if (splice_time && !steady_state)
        throw std::logic_error("trajectory: splice_time without steady_state");
}

} // namespace rdlab
