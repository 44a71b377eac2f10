#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace wpcn {

// H-AP to user geometry. Distances in meters, path loss exponent dimensionless.
struct Topology {
    Eigen::VectorXd distances_m;
    double path_loss_exponent = 2.0;

    int num_users() const { return static_cast<int>(distances_m.size()); }
    void validate() const;  // throws std::invalid_argument
};

// One quasi-static fading block. Gains are linear power gains; uplink equals
// downlink (reciprocal links).
struct ChannelRealization {
    Eigen::VectorXd h_dl;
    Eigen::VectorXd h_ul;
    std::uint64_t base_seed = 0;
    std::uint64_t trial_index = 0;

    int num_users() const { return static_cast<int>(h_dl.size()); }
};

// Deterministic part of the gain: D^-gamma.
double path_loss_gain(double distance_m, double path_loss_exponent);

// Rayleigh-faded gains h_i = beta_i^2 * D_i^-gamma with beta^2 ~ Exp(1).
// Pure function of (topology, base_seed, trial_index): the per-user draws come
// from a counter-based stream, so call order and threading are irrelevant.
ChannelRealization sample_channel(const Topology& topology,
                                  std::uint64_t base_seed,
                                  std::uint64_t trial_index);

namespace detail {
// SplitMix64 finalizer, used as the counter-based bit mixer.
std::uint64_t mix64(std::uint64_t x);
// Uniform draw in [0,1) from a mixed key.
double uniform01(std::uint64_t key);
// Unit-mean exponential draw for (base_seed, trial_index, user).
double unit_exponential(std::uint64_t base_seed, std::uint64_t trial_index,
                        std::uint64_t user_index);
}  // namespace detail

}  // namespace wpcn
