#include "wpcn/physics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpcn {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watt_to_dbm(double watt) {
    if (watt <= 0.0)
        throw std::invalid_argument("watt_to_dbm: power must be > 0");
    return 30.0 + 10.0 * std::log10(watt);
}

void SystemConfig::validate() const {
    topology.validate();
    if (num_users != topology.num_users())
        throw std::invalid_argument("config.num_users: must match topology size");
    if (avg_dl_power_w <= 0.0)
        throw std::invalid_argument("config.avg_dl_power_w: must be > 0");
    if (peak_dl_power_w < avg_dl_power_w)
        throw std::invalid_argument("config.peak_dl_power_w: must be >= avg_dl_power_w");
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("config.alpha: must lie in [0,1]");
    if (harvest_efficiency <= 0.0 || harvest_efficiency > 1.0)
        throw std::invalid_argument("config.harvest_efficiency: must lie in (0,1]");
    if (noise_power_w <= 0.0)
        throw std::invalid_argument("config.noise_power_w: must be > 0");
    if (circuit_power_w.size() != num_users)
        throw std::invalid_argument("config.circuit_power_w: length must equal num_users");
    if ((circuit_power_w.array() < 0.0).any())
        throw std::invalid_argument("config.circuit_power_w: entries must be >= 0");
    if (dl_energy_budget_j && *dl_energy_budget_j <= 0.0)
        throw std::invalid_argument("config.dl_energy_budget_j: must be > 0 when present");
}

double harvested_energy_subslot(double h_dl_i, double p_dl_j, double tau_d,
                                int num_users, double eta) {
    if (num_users < 1)
        throw std::invalid_argument("harvested_energy_subslot: num_users must be >= 1");
    if (h_dl_i < 0.0 || p_dl_j < 0.0 || tau_d < 0.0 || eta < 0.0)
        throw std::invalid_argument("harvested_energy_subslot: inputs must be non-negative");
    return eta * h_dl_i * p_dl_j * tau_d / static_cast<double>(num_users);
}

double total_harvested(double h_dl_i, const Eigen::VectorXd& p_dl, double tau_d,
                       int num_users, double eta) {
    if (num_users < 1)
        throw std::invalid_argument("total_harvested: num_users must be >= 1");
    if (h_dl_i < 0.0 || tau_d < 0.0 || eta < 0.0 || (p_dl.array() < 0.0).any())
        throw std::invalid_argument("total_harvested: inputs must be non-negative");
    return eta * h_dl_i * p_dl.sum() * tau_d / static_cast<double>(num_users);
}

double rate(double tau_u, double h_ul, double p_ul, double noise_power_w) {
    if (noise_power_w <= 0.0)
        throw std::invalid_argument("rate: noise power must be > 0");
    if (tau_u < 0.0 || h_ul < 0.0 || p_ul < 0.0)
        throw std::invalid_argument("rate: invalid argument sign");
    if (tau_u == 0.0) return 0.0;
    if (h_ul == 0.0)
        throw std::invalid_argument("rate: gain must be > 0 for active users");
    return tau_u * std::log1p(h_ul * p_ul / noise_power_w);
}

double sum_rate(const Schedule& schedule, const ChannelRealization& channel,
                const SystemConfig& config) {
    const int k = config.num_users;
    if (schedule.tau_ul.size() != k || schedule.p_ul.size() != k ||
        channel.h_ul.size() != k)
        throw std::invalid_argument("sum_rate: length mismatch");
    double total = 0.0;
    for (int i = 0; i < k; ++i)
        total += rate(schedule.tau_ul[i], channel.h_ul[i], schedule.p_ul[i],
                      config.noise_power_w);
    return total;
}

const NamedResidual* ResidualReport::find(const std::string& name) const {
    for (const auto& r : residuals)
        if (r.name == name) return &r;
    return nullptr;
}

namespace {

// Relative residual lhs <= rhs, scaled by the right-hand magnitude.
double rel_residual(double lhs, double rhs) {
    double scale = std::max(std::abs(rhs), 1e-300);
    return (lhs - rhs) / scale;
}

}  // namespace

ResidualReport constraint_residuals(const Schedule& schedule,
                                    const ChannelRealization& channel,
                                    const SystemConfig& config, double tol) {
    config.validate();
    const int k = config.num_users;
    if (schedule.p_dl.size() != k || schedule.tau_ul.size() != k ||
        schedule.p_ul.size() != k || channel.h_dl.size() != k)
        throw std::invalid_argument("constraint_residuals: length mismatch");

    ResidualReport report;
    auto add = [&report](std::string name, double residual) {
        report.residuals.push_back({std::move(name), residual});
    };

    // C1: non-negativity (absolute residuals; the bounds are zero).
    double neg = -schedule.tau_d;
    neg = std::max(neg, (-schedule.tau_ul).maxCoeff());
    neg = std::max(neg, (-schedule.p_dl).maxCoeff());
    neg = std::max(neg, (-schedule.p_ul).maxCoeff());
    add("C1", neg);

    // C2: total frame time.
    add("C2", rel_residual(schedule.tau_d + schedule.tau_ul.sum(), 1.0));

    // C3: average downlink power budget.
    const double budget = static_cast<double>(k) * config.avg_dl_power_w;
    add("C3", rel_residual(schedule.p_dl.sum(), budget));

    // C4: peak power per subslot.
    add("C4", rel_residual(schedule.p_dl.maxCoeff(), config.peak_dl_power_w));

    // C5: consumed uplink energy vs harvested energy, per user.
    for (int i = 0; i < k; ++i) {
        double e_i = total_harvested(channel.h_dl[i], schedule.p_dl,
                                     schedule.tau_d, k,
                                     config.harvest_efficiency);
        double consumed = (schedule.p_ul[i] + config.circuit_power_w[i]) *
                          schedule.tau_ul[i];
        add("C5[" + std::to_string(i) + "]", rel_residual(consumed, e_i));
    }

    // C6: uplink durations implied by the downlink power levels.
    const double total_p = schedule.p_dl.sum();
    const double remaining = 1.0 - schedule.tau_d;
    for (int i = 0; i < k; ++i) {
        double residual;
        if (config.alpha == 0.0) {
            // Equal-split convention: durations must match (1-tau_d)/K.
            double target = remaining / static_cast<double>(k);
            residual = std::abs(schedule.tau_ul[i] - target) /
                       std::max(std::abs(target), 1e-300);
        } else if (total_p <= 0.0) {
            residual = schedule.tau_ul[i] > 0.0 ? 1.0 : 0.0;
        } else {
            double floor = (1.0 - config.alpha) * config.avg_dl_power_w;
            double bound = (schedule.p_dl[i] - floor) /
                           (config.alpha * total_p) * remaining;
            residual = rel_residual(schedule.tau_ul[i], bound);
            if (bound <= 0.0 && schedule.tau_ul[i] <= 0.0) residual = 0.0;
        }
        add("C6[" + std::to_string(i) + "]", residual);
    }

    if (config.dl_energy_budget_j)
        add("ED", rel_residual(schedule.tau_d,
                               *config.dl_energy_budget_j / config.avg_dl_power_w));

    report.max_residual = -std::numeric_limits<double>::infinity();
    for (const auto& r : report.residuals)
        report.max_residual = std::max(report.max_residual, r.residual);
    report.feasible = report.max_residual <= tol;
    return report;
}

}  // namespace wpcn
