#pragma once

#include <Eigen/Dense>
#include <limits>

#include "wpcn/physics.hpp"

namespace wpcn {

// Target uplink time fractions tau_i^U / (1 - tau^D). Non-negative, sums to 1.
struct ScheduleFractions {
    Eigen::VectorXd f;

    void validate() const;  // throws std::invalid_argument
};

// Per-subslot harvested energies as measured by a single user.
struct MeasuredEnergies {
    Eigen::VectorXd e;
};

// Maps schedule fractions to downlink subslot power levels:
//   p_i = (1-alpha)*P_A + alpha*K*P_A*f_i.
// The sum is pinned to K*P_A. Throws if any level exceeds the peak power
// (unrepresentable schedule) or alpha is outside (0,1].
Eigen::VectorXd encode_schedule(const ScheduleFractions& fractions,
                                const SystemConfig& config);

// Recovers fractions from measured energies; any positive scaling of the
// energies yields the same result. Negative components (possible only for
// inputs below the (1-alpha)*P_A floor) are clamped to zero and the vector
// renormalized, so the output is always a valid ScheduleFractions.
ScheduleFractions decode_schedule(const MeasuredEnergies& energies, double alpha);

// Largest dynamic range index unaffected by the peak power constraint,
// (P_P/P_A - 1)/(K - 1) clamped to [0,1]. K < 2 has no skew constraint.
double max_alpha(int num_users, double peak_power_w, double avg_power_w);

// Sentinel returned by max_users when alpha = 0 (no limit).
inline constexpr int kNoUserLimit = std::numeric_limits<int>::max();

// Largest user count unaffected by the peak power constraint,
// floor((P_P/P_A - 1)/alpha + 1).
int max_users(double alpha, double peak_power_w, double avg_power_w);

}  // namespace wpcn
