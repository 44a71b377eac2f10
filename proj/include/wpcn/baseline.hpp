#pragma once

#include "wpcn/optimizer.hpp"

namespace wpcn {

// Equal resource allocation: constant downlink power P_A, equal uplink
// subslots, tau_d free. The comparison scheme of the conventional WPCN.
double era_objective(double tau_d, const ChannelRealization& channel,
                     const SystemConfig& config);

// Maximizes era_objective over tau_d by golden-section search. The returned
// schedule is feasible under both problem variants for any alpha in (0,1].
SolveResult era_optimize(const ChannelRealization& channel,
                         const SystemConfig& config);

}  // namespace wpcn
