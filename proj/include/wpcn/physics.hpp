#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "wpcn/channel.hpp"

namespace wpcn {

// dBm <-> watt. Bandwidth is normalized to 1 Hz throughout, so dBm/Hz
// figures are treated as plain dBm.
double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

// All scalar parameters of the network, in linear units (watts, joules,
// unit frame time).
struct SystemConfig {
    int num_users = 0;
    double avg_dl_power_w = 0.0;      // P_A
    double peak_dl_power_w = 0.0;     // P_P
    double alpha = 1.0;               // dynamic range index, [0,1]
    double harvest_efficiency = 0.5;  // eta, (0,1]
    double noise_power_w = 0.0;       // N0
    Eigen::VectorXd circuit_power_w;  // p_i^c, length K
    std::optional<double> dl_energy_budget_j;  // E^D, off by default
    Topology topology;

    void validate() const;  // throws std::invalid_argument naming the field
};

// One complete operating point of the frame.
struct Schedule {
    double tau_d = 0.0;        // downlink duration
    Eigen::VectorXd p_dl;      // downlink subslot powers, length K
    Eigen::VectorXd tau_ul;    // uplink durations, length K
    Eigen::VectorXd p_ul;      // uplink powers, length K
};

// Energy harvested by user i during one downlink subslot driven at p_dl_j.
double harvested_energy_subslot(double h_dl_i, double p_dl_j, double tau_d,
                                int num_users, double eta);

// Total harvested energy E_i over all K subslots.
double total_harvested(double h_dl_i, const Eigen::VectorXd& p_dl, double tau_d,
                       int num_users, double eta);

// Achievable rate tau_u * ln(1 + h*p/N0) in nats/s/Hz. Zero duration gives
// exactly zero rate.
double rate(double tau_u, double h_ul, double p_ul, double noise_power_w);

double sum_rate(const Schedule& schedule, const ChannelRealization& channel,
                const SystemConfig& config);

struct NamedResidual {
    std::string name;
    double residual = 0.0;  // positive means violated
};

struct ResidualReport {
    std::vector<NamedResidual> residuals;
    double max_residual = 0.0;
    bool feasible = false;

    const NamedResidual* find(const std::string& name) const;
};

constexpr double kFeasibilityTol = 1e-9;

// Signed residuals of constraints C1..C6 of the sum-rate problem; the C6 form
// follows config.alpha (alpha=1 full range, alpha<1 reduced range, alpha=0
// equal split). Checks the downlink energy budget when configured.
ResidualReport constraint_residuals(const Schedule& schedule,
                                    const ChannelRealization& channel,
                                    const SystemConfig& config,
                                    double tol = kFeasibilityTol);

}  // namespace wpcn
