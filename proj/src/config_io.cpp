#include "wpcn/config_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wpcn {

using nlohmann::json;

namespace {

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_number())
        throw std::invalid_argument("config: missing or non-numeric field '" +
                                    field + "'");
    return j[field].get<double>();
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

}  // namespace

SystemConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                    e.what());
    }

    SystemConfig cfg;
    if (!j.contains("distances_m") || !j["distances_m"].is_array() ||
        j["distances_m"].empty())
        throw std::invalid_argument(
            "config: 'distances_m' must be a non-empty array");
    auto distances = j["distances_m"].get<std::vector<double>>();
    cfg.num_users = static_cast<int>(distances.size());
    cfg.topology.distances_m = Eigen::Map<const Eigen::VectorXd>(
        distances.data(), static_cast<long>(distances.size()));
    cfg.topology.path_loss_exponent = require_number(j, "gamma");
    cfg.avg_dl_power_w = dbm_to_watt(require_number(j, "pa_dbm"));
    cfg.peak_dl_power_w = dbm_to_watt(require_number(j, "pp_dbm"));
    cfg.alpha = require_number(j, "alpha");
    cfg.harvest_efficiency = require_number(j, "eta");
    cfg.noise_power_w = dbm_to_watt(require_number(j, "n0_dbm"));

    cfg.circuit_power_w = Eigen::VectorXd::Zero(cfg.num_users);
    if (j.contains("pc_dbm")) {
        const auto& pc = j["pc_dbm"];
        if (pc.is_number()) {
            cfg.circuit_power_w.setConstant(dbm_to_watt(pc.get<double>()));
        } else if (pc.is_array()) {
            if (static_cast<int>(pc.size()) != cfg.num_users)
                throw std::invalid_argument(
                    "config: 'pc_dbm' length must match distances_m");
            for (int i = 0; i < cfg.num_users; ++i)
                cfg.circuit_power_w[i] = dbm_to_watt(pc[i].get<double>());
        } else {
            throw std::invalid_argument(
                "config: 'pc_dbm' must be a number or an array");
        }
    }
    if (j.contains("e_d")) cfg.dl_energy_budget_j = require_number(j, "e_d");

    cfg.validate();
    return cfg;
}

SystemConfig load_config_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string config_to_json(const SystemConfig& config) {
    json j;
    j["K"] = config.num_users;
    j["distances_m"] = vector_to_json(config.topology.distances_m);
    j["gamma"] = config.topology.path_loss_exponent;
    j["pa_dbm"] = watt_to_dbm(config.avg_dl_power_w);
    j["pa_watt"] = config.avg_dl_power_w;
    j["pp_dbm"] = watt_to_dbm(config.peak_dl_power_w);
    j["pp_watt"] = config.peak_dl_power_w;
    j["alpha"] = config.alpha;
    j["eta"] = config.harvest_efficiency;
    j["n0_dbm"] = watt_to_dbm(config.noise_power_w);
    j["n0_watt"] = config.noise_power_w;
    j["pc_watt"] = vector_to_json(config.circuit_power_w);
    if (config.dl_energy_budget_j) j["e_d"] = *config.dl_energy_budget_j;
    return j.dump(2);
}

std::string solve_result_to_json(const SolveResult& result) {
    json j;
    switch (result.status) {
        case SolveStatus::kOptimalAtTolerance: j["status"] = "optimal-at-tolerance"; break;
        case SolveStatus::kFeasibleSuboptimal: j["status"] = "feasible-suboptimal"; break;
        case SolveStatus::kInfeasible: j["status"] = "infeasible"; break;
    }
    j["objective_nats"] = result.objective;
    j["iterations"] = result.iterations;
    j["restarts_used"] = result.restarts_used;
    j["max_residual"] = result.max_residual;
    j["schedule"]["tau_d"] = result.schedule.tau_d;
    j["schedule"]["p_dl_watt"] = vector_to_json(result.schedule.p_dl);
    j["schedule"]["tau_ul"] = vector_to_json(result.schedule.tau_ul);
    j["schedule"]["p_ul_watt"] = vector_to_json(result.schedule.p_ul);
    return j.dump(2);
}

}  // namespace wpcn
