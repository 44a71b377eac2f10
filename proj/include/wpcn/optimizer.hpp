#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wpcn/channel.hpp"
#include "wpcn/physics.hpp"

namespace wpcn {

enum class Variant { kFullRange, kReducedRange };

struct ProblemInstance {
    ChannelRealization channel;
    SystemConfig config;
    Variant variant = Variant::kFullRange;
};

// Builds an instance, picking the variant from config.alpha (alpha = 1 is the
// full-range problem). Throws for alpha = 0, which has nothing to optimize
// beyond the baseline.
ProblemInstance make_problem(const ChannelRealization& channel,
                             const SystemConfig& config);

// Log-domain image of a strictly positive Schedule.
struct TransformedPoint {
    double t_d = 0.0;
    Eigen::VectorXd t_ul;
    Eigen::VectorXd p_dl_log;
    Eigen::VectorXd p_ul_log;
};

enum class SolveStatus { kOptimalAtTolerance, kFeasibleSuboptimal, kInfeasible };

struct SolveResult {
    double objective = 0.0;  // nats/s/Hz
    Schedule schedule;
    long iterations = 0;
    int restarts_used = 0;
    double max_residual = 0.0;
    SolveStatus status = SolveStatus::kInfeasible;
};

struct SolveOptions {
    int restarts = 10;         // random interior starts per inner solve
    double tolerance = 1e-9;   // feasibility tolerance on the result
    int outer_grid = 64;       // coarse tau_d grid before golden section
};

// Sum rate with C5 and C6 held tight: the downlink levels determine the
// uplink fractions, the harvested energy determines the uplink powers.
// tau_d must lie in (0,1).
double reduced_objective(double tau_d, const Eigen::VectorXd& p_dl,
                         const ProblemInstance& problem);

// Outer golden-section search over tau_d combined with projected gradient
// ascent over the downlink power polytope. Deterministic for fixed options.
SolveResult solve(const ProblemInstance& problem,
                  const SolveOptions& options = {});

// Exhaustive tensor grid over tau_d and the budget-tight power simplex.
// Ground truth for small instances; refuses K > 3.
SolveResult oracle_grid_search(const ProblemInstance& problem, int resolution);

TransformedPoint to_transformed(const Schedule& schedule);
Schedule from_transformed(const TransformedPoint& point);

// Residuals of the exp-substituted constraint set; the harvested-energy
// constraint is checked in log-sum-exp form and the time-allocation
// constraint in the normalized form with right-hand side 1.
ResidualReport transformed_constraint_residuals(const TransformedPoint& point,
                                                const ProblemInstance& problem,
                                                double tol = kFeasibilityTol);

namespace detail {

// Maximizes a unimodal function on [lo, hi] by golden-section search.
struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    int iterations = 0;
};
template <typename F>
GoldenResult golden_section_max(F&& f, double lo, double hi, double x_tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    int iters = 2;
    while (b - a > x_tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
        ++iters;
    }
    GoldenResult r;
    r.x = fc >= fd ? c : d;
    r.value = std::max(fc, fd);
    r.iterations = iters;
    return r;
}

// Euclidean projection onto {sum(p) <= budget, lo <= p_i <= hi} by bisection
// on the simplex multiplier.
Eigen::VectorXd project_budget_box(const Eigen::VectorXd& y, double lo,
                                   double hi, double budget);

}  // namespace detail

}  // namespace wpcn
