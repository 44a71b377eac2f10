#include "wpcn/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace wpcn {

namespace {

SystemConfig fig_base_config(std::initializer_list<double> distances) {
    SystemConfig cfg;
    cfg.topology.distances_m =
        Eigen::Map<const Eigen::VectorXd>(distances.begin(),
                                          static_cast<long>(distances.size()));
    cfg.topology.path_loss_exponent = 2.0;
    cfg.num_users = static_cast<int>(distances.size());
    cfg.avg_dl_power_w = dbm_to_watt(20.0);
    cfg.peak_dl_power_w = 4.0 * cfg.avg_dl_power_w;
    cfg.alpha = 0.3;
    cfg.harvest_efficiency = 0.5;
    cfg.noise_power_w = dbm_to_watt(-160.0);
    cfg.circuit_power_w = Eigen::VectorXd::Zero(cfg.num_users);
    return cfg;
}

double kahan_sum(const std::vector<double>& xs) {
    double sum = 0.0, c = 0.0;
    for (double x : xs) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

void mean_and_se(const std::vector<double>& xs, double& mean, double& se) {
    const auto n = static_cast<double>(xs.size());
    mean = kahan_sum(xs) / n;
    se = 0.0;
    if (xs.size() > 1) {
        std::vector<double> sq(xs.size());
        for (size_t i = 0; i < xs.size(); ++i)
            sq[i] = (xs[i] - mean) * (xs[i] - mean);
        se = std::sqrt(kahan_sum(sq) / ((n - 1.0) * n));
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_axis(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

}  // namespace

SweepSpec preset(const std::string& name) {
    SweepSpec spec;
    spec.preset = name;
    spec.trials = 200;
    spec.base_seed = 1;
    if (name == "fig4") {
        // P_A = 20 dBm, K = 5, peak ratio swept, three dynamic range indices.
        spec.base_config = fig_base_config({5.0, 10.0, 15.0, 10.0, 10.0});
        spec.k_values = {5};
        spec.ppr_values = {1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
        spec.alpha_values = {0.3, 0.5, 1.0};
        spec.added_user_distance_m = 10.0;
    } else if (name == "fig5") {
        // Users beyond the {5,10,15} profile sit at 15 m.
        spec.base_config = fig_base_config({5.0, 10.0, 15.0});
        spec.k_values = {3, 5, 10};
        spec.ppr_values = {4.0};
        spec.alpha_values = {0.3};
        spec.added_user_distance_m = 15.0;
    } else if (name == "fig6") {
        // Same as fig5 but the added users sit at 10 m.
        spec.base_config = fig_base_config({5.0, 10.0, 15.0});
        spec.k_values = {3, 5, 10};
        spec.ppr_values = {4.0};
        spec.alpha_values = {0.3};
        spec.added_user_distance_m = 10.0;
    } else {
        throw std::invalid_argument("unknown preset '" + name +
                                    "'; known presets: fig4, fig5, fig6");
    }
    return spec;
}

SystemConfig config_for_point(const SweepSpec& spec, const GridPoint& point) {
    SystemConfig cfg = spec.base_config;
    const int k = point.num_users;
    if (k < 1) throw std::invalid_argument("grid point: num_users must be >= 1");
    const int base_k = spec.base_config.num_users;
    cfg.num_users = k;
    cfg.topology.distances_m.resize(k);
    for (int i = 0; i < k; ++i) {
        if (i < base_k) {
            cfg.topology.distances_m[i] = spec.base_config.topology.distances_m[i];
        } else {
            if (spec.added_user_distance_m <= 0.0)
                throw std::invalid_argument(
                    "grid point: num_users exceeds the base distance profile "
                    "and no added-user distance is set");
            cfg.topology.distances_m[i] = spec.added_user_distance_m;
        }
    }
    cfg.circuit_power_w = Eigen::VectorXd::Constant(
        k, base_k > 0 ? spec.base_config.circuit_power_w[0] : 0.0);
    cfg.peak_dl_power_w = point.peak_to_avg * cfg.avg_dl_power_w;
    cfg.alpha = point.alpha;
    cfg.validate();
    return cfg;
}

SweepResult run_sweep(const SweepSpec& spec, int workers) {
    if (spec.trials < 1)
        throw std::invalid_argument("run_sweep: trials must be >= 1");
    if (workers < 1) workers = 1;

    std::vector<int> k_values = spec.k_values;
    if (k_values.empty()) k_values = {spec.base_config.num_users};
    std::vector<double> ppr_values = spec.ppr_values;
    if (ppr_values.empty())
        ppr_values = {spec.base_config.peak_dl_power_w /
                      spec.base_config.avg_dl_power_w};
    std::vector<double> alpha_values = spec.alpha_values;
    if (alpha_values.empty()) alpha_values = {spec.base_config.alpha};

    SweepResult result;
    result.preset = spec.preset;
    for (int k : k_values) {
        for (double ppr : ppr_values) {
            for (double alpha : alpha_values) {
                GridPoint point{k, ppr, alpha};
                SystemConfig cfg = config_for_point(spec, point);

                std::vector<double> proposed(spec.trials), era(spec.trials);
                std::atomic<int> next{0};
                std::atomic<bool> failed{false};
                std::string failure;
                std::mutex failure_mutex;

                auto worker = [&]() {
                    for (;;) {
                        int t = next.fetch_add(1);
                        if (t >= spec.trials || failed.load()) break;
                        try {
                            ChannelRealization ch = sample_channel(
                                cfg.topology, spec.base_seed,
                                static_cast<std::uint64_t>(t));
                            ProblemInstance prob = make_problem(ch, cfg);
                            SolveResult sr = solve(prob, spec.solver);
                            SolveResult er = era_optimize(ch, cfg);
                            if (sr.status == SolveStatus::kInfeasible ||
                                !std::isfinite(sr.objective) ||
                                !std::isfinite(er.objective))
                                throw std::runtime_error("solver returned an "
                                                         "unusable result");
                            proposed[t] = sr.objective;
                            era[t] = er.objective;
                        } catch (const std::exception& e) {
                            std::lock_guard<std::mutex> lock(failure_mutex);
                            if (!failed.exchange(true))
                                failure = "sweep aborted at K=" +
                                          std::to_string(k) + " ppr=" +
                                          format_axis(ppr) + " alpha=" +
                                          format_axis(alpha) + " trial=" +
                                          std::to_string(t) + " base_seed=" +
                                          std::to_string(spec.base_seed) +
                                          ": " + e.what();
                        }
                    }
                };

                if (workers == 1) {
                    worker();
                } else {
                    std::vector<std::thread> pool;
                    pool.reserve(workers);
                    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
                    for (auto& th : pool) th.join();
                }
                if (failed.load()) throw std::runtime_error(failure);

                SweepRow row;
                row.point = point;
                row.trials = spec.trials;
                row.base_seed = spec.base_seed;
                mean_and_se(proposed, row.mean_proposed, row.se_proposed);
                mean_and_se(era, row.mean_era, row.se_era);
                result.rows.push_back(row);
            }
        }
    }
    return result;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << "preset,K,ppr,alpha,mean_proposed_nats,se_proposed,mean_era_nats,"
           "se_era,trials,base_seed\n";
    for (const auto& row : result.rows) {
        out << result.preset << ',' << row.point.num_users << ','
            << format_axis(row.point.peak_to_avg) << ','
            << format_axis(row.point.alpha) << ','
            << format_double(row.mean_proposed) << ','
            << format_double(row.se_proposed) << ','
            << format_double(row.mean_era) << ','
            << format_double(row.se_era) << ',' << row.trials << ','
            << row.base_seed << '\n';
    }
    return out.str();
}

std::string sweep_to_json(const SweepResult& result) {
    std::ostringstream out;
    out << "{\n  \"preset\": \"" << result.preset << "\",\n  \"rows\": [";
    for (size_t i = 0; i < result.rows.size(); ++i) {
        const auto& row = result.rows[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"K\": " << row.point.num_users
            << ", \"ppr\": " << format_axis(row.point.peak_to_avg)
            << ", \"alpha\": " << format_axis(row.point.alpha)
            << ", \"mean_proposed_nats\": " << format_double(row.mean_proposed)
            << ", \"se_proposed\": " << format_double(row.se_proposed)
            << ", \"mean_era_nats\": " << format_double(row.mean_era)
            << ", \"se_era\": " << format_double(row.se_era)
            << ", \"trials\": " << row.trials
            << ", \"base_seed\": " << row.base_seed << "}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

}  // namespace wpcn
