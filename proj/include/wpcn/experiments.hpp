#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpcn/baseline.hpp"
#include "wpcn/optimizer.hpp"

namespace wpcn {

// One sweep grid point. Axes not swept by a preset hold a single value.
struct GridPoint {
    int num_users = 0;
    double peak_to_avg = 1.0;  // P_P / P_A
    double alpha = 1.0;
};

struct SweepSpec {
    std::string preset = "custom";
    SystemConfig base_config;  // distances here are the K=min profile
    std::vector<int> k_values;
    std::vector<double> ppr_values;
    std::vector<double> alpha_values;
    double added_user_distance_m = 0.0;  // distance of users appended beyond
                                         // the base profile (fig5/fig6)
    int trials = 200;
    std::uint64_t base_seed = 1;
    SolveOptions solver;
};

struct SweepRow {
    GridPoint point;
    double mean_proposed = 0.0;
    double se_proposed = 0.0;
    double mean_era = 0.0;
    double se_era = 0.0;
    int trials = 0;
    std::uint64_t base_seed = 0;
};

struct SweepResult {
    std::string preset;
    std::vector<SweepRow> rows;
};

// Known presets: fig4, fig5, fig6. Throws for anything else, listing them.
SweepSpec preset(const std::string& name);

// The config for one grid point of a spec (distance profile extended to K,
// peak power and alpha substituted).
SystemConfig config_for_point(const SweepSpec& spec, const GridPoint& point);

// Runs trials x grid Monte Carlo. Trials may be spread over `workers`
// threads; the result is bit-identical for any worker count. A solver
// failure aborts with the (grid point, trial, seed) triple in the message.
SweepResult run_sweep(const SweepSpec& spec, int workers = 1);

std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result);

}  // namespace wpcn
