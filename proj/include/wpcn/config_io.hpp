#pragma once

#include <string>

#include "wpcn/experiments.hpp"
#include "wpcn/physics.hpp"

namespace wpcn {

// Flat JSON config: powers in dBm, distances in meters. Required fields:
// distances_m, gamma, pa_dbm, pp_dbm, alpha, eta, n0_dbm. Optional:
// pc_dbm (scalar or per-user list), e_d (joules).
SystemConfig load_config_json(const std::string& path);
SystemConfig parse_config_json(const std::string& text);

// Config echoed with both dBm and linear watts.
std::string config_to_json(const SystemConfig& config);

std::string solve_result_to_json(const SolveResult& result);

}  // namespace wpcn
