#pragma once

#include <string>
#include <variant>

namespace rdlab {

/// Certified long-time outcomes. Extinction: the sup dropped below
/// theta*(1-delta), so the spatially homogeneous supersolution decays to 0.
/// Invasion: the solution dominates a pre-calibrated box datum that is itself
/// certified to invade. Undecided is a value, not an error.
struct Extinction {
    double t_cert;
    double sup_at_cert;
};
struct Invasion {
    double t_cert;
    double min_on_box;
};
struct Undecided {
    double T_max;
    double sup_final;
};

using Fate = std::variant<Extinction, Invasion, Undecided>;

inline bool is_extinction(const Fate& f) { return std::holds_alternative<Extinction>(f); }
inline bool is_invasion(const Fate& f) { return std::holds_alternative<Invasion>(f); }
inline bool is_undecided(const Fate& f) { return std::holds_alternative<Undecided>(f); }

std::string to_string(const Fate& f);

/// Certificate parameters. alpha_inv and R_inv come from
/// calibrate_invasion_box; delta is the safety margin on both certificates.
struct FateParams {
    double delta = 0.1;
    double alpha_inv = 0.0; // in (beta*, 1); 0 means not yet calibrated
    double R_inv = 0.0;     // half-width of the certification box

    bool calibrated() const { return alpha_inv > 0.0 && R_inv > 0.0; }
};

} // namespace rdlab
