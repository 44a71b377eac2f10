#include "wpcn/baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {

double era_objective(double tau_d, const ChannelRealization& channel,
                     const SystemConfig& config) {
    if (!(tau_d > 0.0 && tau_d < 1.0))
        throw std::invalid_argument("era_objective: tau_d must lie in (0,1)");
    const int k = config.num_users;
    if (channel.h_dl.size() != k)
        throw std::invalid_argument("era_objective: channel length mismatch");
    const double tau_u = (1.0 - tau_d) / static_cast<double>(k);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        if (channel.h_dl[i] <= 0.0) continue;
        double e_i = config.harvest_efficiency * channel.h_dl[i] *
                     config.avg_dl_power_w * tau_d;
        double pu = e_i / tau_u - config.circuit_power_w[i];
        if (pu <= 0.0) continue;
        sum += tau_u * std::log1p(channel.h_ul[i] * pu / config.noise_power_w);
    }
    return sum;
}

SolveResult era_optimize(const ChannelRealization& channel,
                         const SystemConfig& config) {
    config.validate();
    const int k = config.num_users;

    // Coarse grid then golden section; the objective is concave in tau_d.
    auto f = [&](double tau) { return era_objective(tau, channel, config); };
    const int grid = 64;
    int best_j = 1;
    double best_val = -1.0;
    for (int j = 1; j <= grid; ++j) {
        double tau = static_cast<double>(j) / (grid + 1);
        double v = f(tau);
        if (v > best_val) {
            best_val = v;
            best_j = j;
        }
    }
    double lo = std::max(static_cast<double>(best_j - 1) / (grid + 1), 1e-9);
    double hi = std::min(static_cast<double>(best_j + 1) / (grid + 1), 1.0 - 1e-9);
    auto gr = detail::golden_section_max(f, lo, hi, 1e-7);
    double tau_d = gr.value >= best_val
                       ? gr.x
                       : static_cast<double>(best_j) / (grid + 1);

    SolveResult out;
    out.schedule.tau_d = tau_d;
    out.schedule.p_dl = Eigen::VectorXd::Constant(k, config.avg_dl_power_w);
    out.schedule.tau_ul =
        Eigen::VectorXd::Constant(k, (1.0 - tau_d) / static_cast<double>(k));
    out.schedule.p_ul = Eigen::VectorXd::Zero(k);
    for (int i = 0; i < k; ++i) {
        double e_i = config.harvest_efficiency * channel.h_dl[i] *
                     config.avg_dl_power_w * tau_d;
        double pu = e_i / out.schedule.tau_ul[i] - config.circuit_power_w[i];
        if (pu <= 0.0 || channel.h_dl[i] <= 0.0) {
            out.schedule.tau_ul[i] = 0.0;
            continue;
        }
        out.schedule.p_ul[i] = pu;
    }
    out.objective = sum_rate(out.schedule, channel, config);
    out.iterations = grid + gr.iterations;
    out.restarts_used = 0;
    ResidualReport rep = constraint_residuals(out.schedule, channel, config);
    out.max_residual = rep.max_residual;
    out.status = rep.feasible ? SolveStatus::kOptimalAtTolerance
                              : SolveStatus::kFeasibleSuboptimal;
    return out;
}

}  // namespace wpcn
