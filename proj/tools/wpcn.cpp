#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wpcn/baseline.hpp"
#include "wpcn/config_io.hpp"
#include "wpcn/experiments.hpp"
#include "wpcn/plm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainError = 1;
constexpr int kExitSolverFailure = 2;

int default_workers() {
    if (const char* env = std::getenv("WPCN_WORKERS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size())
            throw std::invalid_argument("malformed number '" + item + "'");
        values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("empty list");
    return values;
}

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + path + "'");
    out << text;
}

int cmd_solve(const std::string& config_path, std::uint64_t seed,
              std::uint64_t trial, const std::string& out_path) {
    wpcn::SystemConfig cfg = wpcn::load_config_json(config_path);
    wpcn::ChannelRealization ch = wpcn::sample_channel(cfg.topology, seed, trial);
    wpcn::ProblemInstance prob = wpcn::make_problem(ch, cfg);
    wpcn::SolveResult proposed = wpcn::solve(prob);
    if (proposed.status == wpcn::SolveStatus::kInfeasible) {
        std::cerr << "solve: infeasible configuration\n";
        return kExitSolverFailure;
    }
    wpcn::SolveResult era = wpcn::era_optimize(ch, cfg);
    std::ostringstream out;
    out << "{\n\"config\": " << wpcn::config_to_json(cfg)
        << ",\n\"seed\": " << seed << ",\n\"trial\": " << trial
        << ",\n\"proposed\": " << wpcn::solve_result_to_json(proposed)
        << ",\n\"era\": " << wpcn::solve_result_to_json(era) << "\n}\n";
    write_or_print(out_path, out.str());
    return kExitOk;
}

int cmd_decode(const std::string& energies_csv, double alpha) {
    std::vector<double> e = parse_csv_doubles(energies_csv);
    wpcn::MeasuredEnergies me;
    me.e = Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<long>(e.size()));
    wpcn::ScheduleFractions f = wpcn::decode_schedule(me, alpha);
    for (int i = 0; i < f.f.size(); ++i) {
        if (i) std::cout << ',';
        std::printf("%g", f.f[i]);
    }
    std::cout << '\n';
    return kExitOk;
}

int cmd_oracle(const std::string& config_path, std::uint64_t seed,
               std::uint64_t trial, int resolution,
               const std::string& out_path) {
    wpcn::SystemConfig cfg = wpcn::load_config_json(config_path);
    if (cfg.num_users > 3) {
        std::cerr << "oracle limited to K <= 3\n";
        return kExitDomainError;
    }
    wpcn::ChannelRealization ch = wpcn::sample_channel(cfg.topology, seed, trial);
    wpcn::ProblemInstance prob = wpcn::make_problem(ch, cfg);
    wpcn::SolveResult result = wpcn::oracle_grid_search(prob, resolution);
    write_or_print(out_path, wpcn::solve_result_to_json(result) + "\n");
    return kExitOk;
}

int cmd_sweep(const std::string& preset_name, int trials,
              std::uint64_t base_seed, const std::string& out_path,
              int workers) {
    wpcn::SweepSpec spec = wpcn::preset(preset_name);
    if (trials > 0) spec.trials = trials;
    spec.base_seed = base_seed;
    // Sweep-scale solver settings: the uniform start guarantees the
    // proposed scheme never falls below the ERA point.
    spec.solver.restarts = 2;
    wpcn::SweepResult result = wpcn::run_sweep(spec, workers);
    write_or_print(out_path, wpcn::sweep_to_csv(result));
    if (!out_path.empty()) {
        std::string json_path = out_path;
        auto dot = json_path.rfind('.');
        if (dot != std::string::npos) json_path.resize(dot);
        json_path += ".json";
        write_or_print(json_path, wpcn::sweep_to_json(result));
    }
    return kExitOk;
}

int cmd_presets() {
    for (const char* name : {"fig4", "fig5", "fig6"}) {
        wpcn::SweepSpec spec = wpcn::preset(name);
        std::cout << "== " << name << " ==\n";
        std::cout << "base config: " << wpcn::config_to_json(spec.base_config)
                  << "\n";
        std::cout << "K values:";
        for (int k : spec.k_values) std::cout << ' ' << k;
        std::cout << "\nppr values:";
        for (double v : spec.ppr_values) std::cout << ' ' << v;
        std::cout << "\nalpha values:";
        for (double v : spec.alpha_values) std::cout << ' ' << v;
        std::cout << "\nadded-user distance: " << spec.added_user_distance_m
                  << " m\ntrials: " << spec.trials
                  << "\nbase seed: " << spec.base_seed << "\n\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WPCN power-level-modulation scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, energies_csv, preset_name;
    std::uint64_t seed = 1, trial = 0, base_seed = 1;
    double alpha = 1.0;
    int resolution = 400, trials = 0, workers = default_workers();

    auto* solve_cmd = app.add_subcommand("solve", "solve one channel realization");
    solve_cmd->add_option("--config", config_path)->required();
    solve_cmd->add_option("--seed", seed)->required();
    solve_cmd->add_option("--trial", trial);
    solve_cmd->add_option("--out", out_path);

    auto* decode_cmd = app.add_subcommand("decode", "decode uplink fractions from energies");
    decode_cmd->add_option("--energies", energies_csv)->required();
    decode_cmd->add_option("--alpha", alpha)->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "grid-search oracle (K <= 3)");
    oracle_cmd->add_option("--config", config_path)->required();
    oracle_cmd->add_option("--seed", seed)->required();
    oracle_cmd->add_option("--trial", trial);
    oracle_cmd->add_option("--resolution", resolution);
    oracle_cmd->add_option("--out", out_path);

    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over a preset");
    sweep_cmd->add_option("--preset", preset_name)->required();
    sweep_cmd->add_option("--trials", trials);
    sweep_cmd->add_option("--base-seed", base_seed);
    sweep_cmd->add_option("--out", out_path)->required();
    sweep_cmd->add_option("--workers", workers);

    auto* presets_cmd = app.add_subcommand("presets", "list presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(solve_cmd))
            return cmd_solve(config_path, seed, trial, out_path);
        if (app.got_subcommand(decode_cmd))
            return cmd_decode(energies_csv, alpha);
        if (app.got_subcommand(oracle_cmd))
            return cmd_oracle(config_path, seed, trial, resolution, out_path);
        if (app.got_subcommand(sweep_cmd))
            return cmd_sweep(preset_name, trials, base_seed, out_path, workers);
        if (app.got_subcommand(presets_cmd)) return cmd_presets();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    return kExitDomainError;
}
