#include "wpcn/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpcn {

namespace {

// Hot-path evaluation of the reduced objective (C5, C6 tight) without
// argument validation.
struct ReducedEval {
    int k;
    double alpha;
    double floor_w;     // (1-alpha)*P_A
    double eta_over_k;  // eta/K
    double n0;
    const Eigen::VectorXd& h;
    const Eigen::VectorXd& pc;

    explicit ReducedEval(const ProblemInstance& prob)
        : k(prob.config.num_users),
          alpha(prob.config.alpha),
          floor_w((1.0 - prob.config.alpha) * prob.config.avg_dl_power_w),
          eta_over_k(prob.config.harvest_efficiency / prob.config.num_users),
          n0(prob.config.noise_power_w),
          h(prob.channel.h_dl),
          pc(prob.config.circuit_power_w) {}

    double operator()(double tau_d, const double* p_dl) const {
        double total = 0.0;
        for (int i = 0; i < k; ++i) total += p_dl[i];
        if (total <= 0.0) return 0.0;
        const double remaining = 1.0 - tau_d;
        const double inv_alpha_total = 1.0 / (alpha * total);
        const double e_scale = eta_over_k * total * tau_d;  // E_i / h_i
        double sum = 0.0;
        for (int i = 0; i < k; ++i) {
            double excess = p_dl[i] - floor_w;
            double frac = excess * inv_alpha_total;
            if (frac <= 1e-14) continue;  // zero-duration convention
            double tau = frac * remaining;
            double pu = e_scale * h[i] / tau - pc[i];
            if (pu <= 0.0 || h[i] <= 0.0) continue;
            sum += tau * std::log1p(h[i] * pu / n0);
        }
        return sum;
    }
};

// Objective-equal candidates are broken toward the lexicographically
// smallest (tau_d, p_dl) so outputs are deterministic.
struct Candidate {
    double value = -std::numeric_limits<double>::infinity();
    double tau_d = 0.0;
    Eigen::VectorXd p_dl;
};

bool better(const Candidate& a, const Candidate& b) {
    constexpr double kTieBand = 1e-12;
    if (a.value > b.value + kTieBand) return true;
    if (b.value > a.value + kTieBand) return false;
    if (a.tau_d != b.tau_d) return a.tau_d < b.tau_d;
    for (int i = 0; i < a.p_dl.size() && i < b.p_dl.size(); ++i)
        if (a.p_dl[i] != b.p_dl[i]) return a.p_dl[i] < b.p_dl[i];
    return false;
}

// Assembles the full operating point implied by (tau_d, p_dl): uplink
// durations from C6 tight, uplink powers from C5 tight. Users whose
// harvested energy cannot cover the circuit power get zero duration.
Schedule assemble_schedule(double tau_d, const Eigen::VectorXd& p_dl,
                           const ProblemInstance& prob) {
    const auto& cfg = prob.config;
    const int k = cfg.num_users;
    Schedule s;
    s.tau_d = tau_d;
    s.p_dl = p_dl;
    s.tau_ul = Eigen::VectorXd::Zero(k);
    s.p_ul = Eigen::VectorXd::Zero(k);
    const double total = p_dl.sum();
    if (total <= 0.0) return s;
    const double floor_w = (1.0 - cfg.alpha) * cfg.avg_dl_power_w;
    for (int i = 0; i < k; ++i) {
        double frac = (p_dl[i] - floor_w) / (cfg.alpha * total);
        if (frac <= 1e-14) continue;
        double tau = frac * (1.0 - tau_d);
        double e_i = total_harvested(prob.channel.h_dl[i], p_dl, tau_d, k,
                                     cfg.harvest_efficiency);
        double pu = e_i / tau - cfg.circuit_power_w[i];
        if (pu <= 0.0 || prob.channel.h_dl[i] <= 0.0) continue;
        s.tau_ul[i] = tau;
        s.p_ul[i] = pu;
    }
    return s;
}

// Deterministic pseudo-random interior start for restart r.
Eigen::VectorXd restart_point(int k, int restart, double lo, double hi,
                              double budget) {
    Eigen::VectorXd y(k);
    for (int i = 0; i < k; ++i) {
        std::uint64_t key = detail::mix64(
            0x9d2c5680u ^ (static_cast<std::uint64_t>(restart) * 1000003u + i));
        y[i] = lo + (hi - lo) * detail::uniform01(key);
    }
    return detail::project_budget_box(y, lo, hi, budget);
}

struct InnerResult {
    double value = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd p_dl;
    long iterations = 0;
};

// Projected gradient ascent with backtracking line search from one start.
InnerResult pga(const ReducedEval& eval, double tau_d, Eigen::VectorXd p,
                double lo, double hi, double budget, double step_scale) {
    constexpr int kMaxIters = 200;
    InnerResult res;
    double f = eval(tau_d, p.data());
    double step = step_scale;
    Eigen::VectorXd grad(p.size()), trial(p.size());
    const double eps = 1e-6 * step_scale;
    int stall = 0;
    for (int iter = 0; iter < kMaxIters; ++iter) {
        ++res.iterations;
        for (int i = 0; i < p.size(); ++i) {
            double saved = p[i];
            p[i] = saved + eps;
            double fp = eval(tau_d, p.data());
            p[i] = saved - eps;
            double fm = eval(tau_d, p.data());
            p[i] = saved;
            grad[i] = (fp - fm) / (2.0 * eps);
        }
        if (grad.norm() * step_scale < 1e-14) break;
        bool accepted = false;
        double f_new = f;
        for (int ls = 0; ls < 40; ++ls) {
            trial = detail::project_budget_box(p + step * grad, lo, hi, budget);
            f_new = eval(tau_d, trial.data());
            if (f_new > f + 1e-14) {
                accepted = true;
                break;
            }
            step *= 0.5;
            if (step < 1e-15 * step_scale) break;
        }
        if (!accepted) break;
        p = trial;
        if (f_new - f < 1e-12 * (1.0 + std::abs(f))) {
            if (++stall >= 2) {
                f = f_new;
                break;
            }
        } else {
            stall = 0;
        }
        f = f_new;
        step = std::min(step * 1.5, 1e3 * step_scale);
    }
    res.value = f;
    res.p_dl = std::move(p);
    return res;
}

// Exact budget-tight allocation for fixed tau_d. With sum(p) = K*P_A the
// objective separates per user in the uplink durations, each term concave,
// so the optimum is a water-filling point: bisection on the shared KKT
// multiplier, inner bisection on each user's marginal rate.
Eigen::VectorXd water_filling_start(const ProblemInstance& prob, double tau_d) {
    const auto& cfg = prob.config;
    const int k = cfg.num_users;
    const double pa = cfg.avg_dl_power_w;
    const double floor_w = (1.0 - cfg.alpha) * pa;
    const double remaining = 1.0 - tau_d;
    const double excess_total = cfg.alpha * k * pa;
    const double tau_per_excess = remaining / excess_total;
    const double tau_min = 1e-12 * remaining;

    // Marginal rate of user i at duration tau (budget-tight harvested energy).
    Eigen::VectorXd a(k), c(k), cap(k);
    for (int i = 0; i < k; ++i) {
        double e_i = cfg.harvest_efficiency * prob.channel.h_dl[i] * pa * tau_d;
        a[i] = prob.channel.h_dl[i] * e_i / cfg.noise_power_w;
        c[i] = prob.channel.h_dl[i] * cfg.circuit_power_w[i] / cfg.noise_power_w;
        cap[i] = (cfg.peak_dl_power_w - floor_w) * tau_per_excess;
        if (c[i] > 0.0) cap[i] = std::min(cap[i], 0.999999 * a[i] / c[i]);
        cap[i] = std::min(cap[i], remaining);
    }
    auto marginal = [&](int i, double tau) {
        double snr = a[i] / tau - c[i];
        if (snr <= 0.0) return -std::numeric_limits<double>::infinity();
        return std::log1p(snr) - (a[i] / tau) / (1.0 + snr);
    };
    auto duration_at = [&](int i, double lambda) {
        if (a[i] <= 0.0 || cap[i] <= tau_min) return 0.0;
        if (marginal(i, cap[i]) >= lambda) return cap[i];
        if (marginal(i, tau_min) <= lambda) return 0.0;
        double lo = tau_min, hi = cap[i];
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (marginal(i, mid) > lambda ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    double lam_lo = 0.0;
    double lam_hi = 0.0;
    for (int i = 0; i < k; ++i)
        if (a[i] > 0.0) lam_hi = std::max(lam_hi, marginal(i, tau_min));
    double total_at_zero = 0.0;
    for (int i = 0; i < k; ++i) total_at_zero += duration_at(i, 0.0);
    double lambda = 0.0;
    if (total_at_zero > remaining) {
        for (int it = 0; it < 80; ++it) {
            lambda = 0.5 * (lam_lo + lam_hi);
            double total = 0.0;
            for (int i = 0; i < k; ++i) total += duration_at(i, lambda);
            (total > remaining ? lam_lo : lam_hi) = lambda;
        }
        lambda = lam_hi;
    }

    Eigen::VectorXd p(k);
    double used = 0.0;
    for (int i = 0; i < k; ++i) {
        double tau = duration_at(i, lambda);
        used += tau;
        p[i] = floor_w + tau / tau_per_excess;
    }
    // Distribute any unspent budget uniformly within the caps (degenerate
    // cases with circuit power only); PGA polishes from here anyway.
    double deficit = excess_total - (used / tau_per_excess);
    if (deficit > 1e-15 * excess_total) {
        for (int i = 0; i < k && deficit > 0.0; ++i) {
            double room = cfg.peak_dl_power_w - p[i];
            double give = std::min(room, deficit / (k - i));
            p[i] += give;
            deficit -= give;
        }
    }
    return detail::project_budget_box(p, floor_w, cfg.peak_dl_power_w,
                                      static_cast<double>(k) * pa);
}

// Best downlink power vector for a fixed tau_d: uniform and water-filling
// starts plus random interior restarts.
InnerResult inner_solve(const ProblemInstance& prob, const ReducedEval& eval,
                        double tau_d, int restarts) {
    const auto& cfg = prob.config;
    const int k = cfg.num_users;
    const double lo = (1.0 - cfg.alpha) * cfg.avg_dl_power_w;
    const double hi = cfg.peak_dl_power_w;
    const double budget = static_cast<double>(k) * cfg.avg_dl_power_w;
    InnerResult best;
    long iters = 0;
    // Starts 0 and 1 are always run: the uniform profile (pins dominance
    // over the equal-allocation baseline) and the exact budget-tight
    // water-filling point; the rest are random restarts.
    for (int r = 0; r < std::max(restarts, 2); ++r) {
        Eigen::VectorXd p0 =
            r == 0   ? Eigen::VectorXd::Constant(k, cfg.avg_dl_power_w)
            : r == 1 ? water_filling_start(prob, tau_d)
                     : restart_point(k, r, lo, hi, budget);
        InnerResult cand =
            pga(eval, tau_d, std::move(p0), lo, hi, budget, cfg.avg_dl_power_w);
        iters += cand.iterations;
        Candidate a{cand.value, tau_d, cand.p_dl};
        Candidate b{best.value, tau_d, best.p_dl};
        if (best.p_dl.size() == 0 || better(a, b)) best = std::move(cand);
    }
    best.iterations = iters;
    return best;
}

SolveResult finish(const ProblemInstance& prob, const Candidate& best,
                   long iterations, int restarts, double tol) {
    SolveResult out;
    out.schedule = assemble_schedule(best.tau_d, best.p_dl, prob);
    out.objective = sum_rate(out.schedule, prob.channel, prob.config);
    out.iterations = iterations;
    out.restarts_used = restarts;
    ResidualReport rep =
        constraint_residuals(out.schedule, prob.channel, prob.config, tol);
    out.max_residual = rep.max_residual;
    out.status = rep.feasible ? SolveStatus::kOptimalAtTolerance
                              : SolveStatus::kFeasibleSuboptimal;
    return out;
}

}  // namespace

ProblemInstance make_problem(const ChannelRealization& channel,
                             const SystemConfig& config) {
    config.validate();
    if (config.alpha == 0.0)
        throw std::invalid_argument(
            "make_problem: alpha = 0 is the fixed equal-split scheme; use the "
            "baseline module");
    ProblemInstance prob;
    prob.channel = channel;
    prob.config = config;
    prob.variant =
        config.alpha == 1.0 ? Variant::kFullRange : Variant::kReducedRange;
    return prob;
}

double reduced_objective(double tau_d, const Eigen::VectorXd& p_dl,
                         const ProblemInstance& problem) {
    if (!(tau_d > 0.0 && tau_d < 1.0))
        throw std::invalid_argument("reduced_objective: tau_d must lie in (0,1)");
    if (p_dl.size() != problem.config.num_users)
        throw std::invalid_argument("reduced_objective: p_dl length mismatch");
    return ReducedEval(problem)(tau_d, p_dl.data());
}

SolveResult solve(const ProblemInstance& problem, const SolveOptions& options) {
    const auto& cfg = problem.config;
    if (cfg.peak_dl_power_w < cfg.avg_dl_power_w ||
        cfg.alpha <= 0.0 || cfg.alpha > 1.0) {
        SolveResult out;
        out.status = SolveStatus::kInfeasible;
        return out;
    }
    cfg.validate();

    ReducedEval eval(problem);
    Candidate best;
    long iterations = 0;
    auto probe = [&](double tau_d) {
        InnerResult r = inner_solve(problem, eval, tau_d, options.restarts);
        iterations += r.iterations;
        Candidate cand{r.value, tau_d, r.p_dl};
        if (best.p_dl.size() == 0 || better(cand, best)) best = std::move(cand);
        return r.value;
    };

    // Coarse grid over tau_d, then golden section around the best cell.
    const int grid = std::max(options.outer_grid, 3);
    int best_j = 1;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= grid; ++j) {
        double tau = static_cast<double>(j) / (grid + 1);
        double v = probe(tau);
        if (v > best_val) {
            best_val = v;
            best_j = j;
        }
    }
    double lo = std::max(static_cast<double>(best_j - 1) / (grid + 1), 1e-9);
    double hi = std::min(static_cast<double>(best_j + 1) / (grid + 1), 1.0 - 1e-9);
    auto gr = detail::golden_section_max(probe, lo, hi, 1e-7);
    (void)gr;

    return finish(problem, best, iterations, options.restarts,
                  options.tolerance);
}

SolveResult oracle_grid_search(const ProblemInstance& problem, int resolution) {
    const auto& cfg = problem.config;
    cfg.validate();
    const int k = cfg.num_users;
    if (k > 3)
        throw std::invalid_argument("oracle_grid_search: limited to K <= 3");
    if (resolution < 2)
        throw std::invalid_argument("oracle_grid_search: resolution must be >= 2");
    if (cfg.alpha <= 0.0)
        throw std::invalid_argument("oracle_grid_search: alpha must be > 0");

    ReducedEval eval(problem);
    const double floor_w = (1.0 - cfg.alpha) * cfg.avg_dl_power_w;
    const double cap = cfg.peak_dl_power_w - floor_w;  // per-user excess cap
    const double excess_total = cfg.alpha * k * cfg.avg_dl_power_w;

    Candidate best;
    long evals = 0;
    double p[3] = {0.0, 0.0, 0.0};
    auto consider = [&](double tau, const double* pp) {
        ++evals;
        double v = eval(tau, pp);
        Candidate cand{v, tau, Eigen::Map<const Eigen::VectorXd>(pp, k)};
        if (best.p_dl.size() == 0 || better(cand, best)) best = std::move(cand);
    };

    for (int t = 1; t < resolution; ++t) {
        double tau = static_cast<double>(t) / resolution;
        if (k == 1) {
            p[0] = floor_w + excess_total;
            consider(tau, p);
        } else if (k == 2) {
            for (int i = 0; i <= resolution; ++i) {
                double x0 = excess_total * (static_cast<double>(i) / resolution);
                double x1 = excess_total - x0;
                if (x0 > cap || x1 > cap) continue;
                p[0] = floor_w + x0;
                p[1] = floor_w + x1;
                consider(tau, p);
            }
        } else {
            for (int i = 0; i <= resolution; ++i) {
                double x0 = excess_total * (static_cast<double>(i) / resolution);
                if (x0 > cap) continue;
                for (int j = 0; j <= resolution - i; ++j) {
                    double x1 = excess_total * (static_cast<double>(j) / resolution);
                    double x2 = excess_total - x0 - x1;
                    if (x1 > cap || x2 > cap || x2 < 0.0) continue;
                    p[0] = floor_w + x0;
                    p[1] = floor_w + x1;
                    p[2] = floor_w + x2;
                    consider(tau, p);
                }
            }
        }
    }
    return finish(problem, best, evals, 0, kFeasibilityTol);
}

TransformedPoint to_transformed(const Schedule& schedule) {
    if (schedule.tau_d <= 0.0 || (schedule.p_dl.array() <= 0.0).any() ||
        (schedule.tau_ul.array() <= 0.0).any() ||
        (schedule.p_ul.array() <= 0.0).any())
        throw std::invalid_argument("to_transformed: all entries must be > 0");
    TransformedPoint t;
    t.t_d = std::log(schedule.tau_d);
    t.t_ul = schedule.tau_ul.array().log();
    t.p_dl_log = schedule.p_dl.array().log();
    t.p_ul_log = schedule.p_ul.array().log();
    return t;
}

Schedule from_transformed(const TransformedPoint& point) {
    Schedule s;
    s.tau_d = std::exp(point.t_d);
    s.tau_ul = point.t_ul.array().exp();
    s.p_dl = point.p_dl_log.array().exp();
    s.p_ul = point.p_ul_log.array().exp();
    return s;
}

ResidualReport transformed_constraint_residuals(const TransformedPoint& point,
                                                const ProblemInstance& problem,
                                                double tol) {
    const auto& cfg = problem.config;
    const int k = cfg.num_users;
    if (point.t_ul.size() != k || point.p_dl_log.size() != k ||
        point.p_ul_log.size() != k)
        throw std::invalid_argument(
            "transformed_constraint_residuals: length mismatch");

    ResidualReport report;
    auto add = [&report](std::string name, double residual) {
        report.residuals.push_back({std::move(name), residual});
    };

    const double tau_d = std::exp(point.t_d);
    Eigen::VectorXd p_dl = point.p_dl_log.array().exp();
    const double budget = static_cast<double>(k) * cfg.avg_dl_power_w;

    // Frame time: exp(t_d) + sum exp(t_i) <= 1.
    add("tC1", tau_d + point.t_ul.array().exp().sum() - 1.0);
    // Power budget and peak, relative to their right-hand sides.
    add("tC2", (p_dl.sum() - budget) / budget);
    for (int i = 0; i < k; ++i)
        add("tC3[" + std::to_string(i) + "]",
            (p_dl[i] - cfg.peak_dl_power_w) / cfg.peak_dl_power_w);

    // Harvested energy in log-sum-exp form: both sides of the energy
    // constraint under logarithm, sign-equivalent to the original.
    for (int i = 0; i < k; ++i) {
        double lhs = std::log(std::exp(point.p_ul_log[i] + point.t_ul[i]) +
                              cfg.circuit_power_w[i] * std::exp(point.t_ul[i]));
        double h_i = problem.channel.h_dl[i];
        double rhs;
        if (h_i <= 0.0) {
            rhs = -std::numeric_limits<double>::infinity();
        } else {
            double shift = std::log(cfg.harvest_efficiency * h_i / k) + point.t_d;
            double max_term = point.p_dl_log.maxCoeff() + shift;
            double acc = 0.0;
            for (int j = 0; j < k; ++j)
                acc += std::exp(point.p_dl_log[j] + shift - max_term);
            rhs = max_term + std::log(acc);
        }
        add("tC4[" + std::to_string(i) + "]", lhs - rhs);
    }

    // Time allocation, normalized so the right-hand side is 1:
    //   sum_j exp(t_i + p_j - q_i) + exp(t_d) <= 1,
    // with q_i the log of the modulated excess (p_i for the full-range case).
    const double floor_w = (1.0 - cfg.alpha) * cfg.avg_dl_power_w;
    for (int i = 0; i < k; ++i) {
        double excess = p_dl[i] - floor_w;
        double residual;
        if (excess <= 0.0) {
            residual = (floor_w - p_dl[i]) / cfg.avg_dl_power_w +
                       kFeasibilityTol * 2.0;
        } else {
            double q_i = std::log(excess / cfg.alpha);
            double acc = 0.0;
            for (int j = 0; j < k; ++j)
                acc += std::exp(point.t_ul[i] + point.p_dl_log[j] - q_i);
            residual = acc + tau_d - 1.0;
        }
        add("tC5[" + std::to_string(i) + "]", residual);
    }

    report.max_residual = -std::numeric_limits<double>::infinity();
    for (const auto& r : report.residuals)
        report.max_residual = std::max(report.max_residual, r.residual);
    report.feasible = report.max_residual <= tol;
    return report;
}

namespace detail {

Eigen::VectorXd project_budget_box(const Eigen::VectorXd& y, double lo,
                                   double hi, double budget) {
    Eigen::VectorXd p = y.cwiseMax(lo).cwiseMin(hi);
    if (p.sum() <= budget) return p;
    // Bisection on the shift lambda; sum is non-increasing in lambda and
    // reaches K*lo <= budget at the upper end.
    double lam_lo = 0.0;
    double lam_hi = (y.maxCoeff() - lo);
    for (int it = 0; it < 100; ++it) {
        double lam = 0.5 * (lam_lo + lam_hi);
        double s = (y.array() - lam).cwiseMax(lo).cwiseMin(hi).sum();
        if (s > budget)
            lam_lo = lam;
        else
            lam_hi = lam;
    }
    double lam = lam_hi;
    return (y.array() - lam).cwiseMax(lo).cwiseMin(hi);
}

}  // namespace detail

}  // namespace wpcn
