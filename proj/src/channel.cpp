#include "wpcn/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {

void Topology::validate() const {
    if (distances_m.size() == 0)
        throw std::invalid_argument("topology: distances must be non-empty");
    if ((distances_m.array() <= 0.0).any())
        throw std::invalid_argument("topology: all distances must be > 0");
    if (path_loss_exponent <= 0.0)
        throw std::invalid_argument("topology: path_loss_exponent must be > 0");
}

double path_loss_gain(double distance_m, double path_loss_exponent) {
    if (distance_m <= 0.0)
        throw std::invalid_argument("path_loss_gain: distance must be > 0");
    if (path_loss_exponent <= 0.0)
        throw std::invalid_argument("path_loss_gain: exponent must be > 0");
    return std::pow(distance_m, -path_loss_exponent);
}

namespace detail {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t key) {
    // 53 top bits with a half-ulp offset -> (0,1); both inverse-CDF edges
    // (zero gain at u=0, infinite gain at u=1) are excluded.
    return (static_cast<double>(key >> 11) + 0.5) * 0x1.0p-53;
}

double unit_exponential(std::uint64_t base_seed, std::uint64_t trial_index,
                        std::uint64_t user_index) {
    std::uint64_t key = mix64(mix64(mix64(base_seed) ^ trial_index) ^ user_index);
    double u = uniform01(key);
    return -std::log1p(-u);  // inverse CDF of Exp(1)
}

}  // namespace detail

ChannelRealization sample_channel(const Topology& topology,
                                  std::uint64_t base_seed,
                                  std::uint64_t trial_index) {
    topology.validate();
    const int k = topology.num_users();
    ChannelRealization ch;
    ch.base_seed = base_seed;
    ch.trial_index = trial_index;
    ch.h_dl.resize(k);
    for (int i = 0; i < k; ++i) {
        double beta2 = detail::unit_exponential(base_seed, trial_index,
                                                static_cast<std::uint64_t>(i));
        ch.h_dl[i] = beta2 * path_loss_gain(topology.distances_m[i],
                                            topology.path_loss_exponent);
    }
    ch.h_ul = ch.h_dl;
    return ch;
}

}  // namespace wpcn
