#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "wpcn/baseline.hpp"
#include "wpcn/optimizer.hpp"
#include "wpcn/physics.hpp"

using namespace wpcn;
using wpcn::test::fig_config;
using wpcn::test::vec;

TEST_CASE("dBm conversions") {
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
    CHECK(dbm_to_watt(20.0) == doctest::Approx(0.1));
    CHECK(dbm_to_watt(-160.0) == doctest::Approx(1e-19));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dbm(-170.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        double x = dbm(rng);
        CHECK(watt_to_dbm(dbm_to_watt(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("harvested energy per subslot") {
    CHECK(harvested_energy_subslot(1, 1, 1, 1, 1) == doctest::Approx(1.0));
    CHECK(harvested_energy_subslot(0.01, 0.1, 0.5, 5, 0.5) ==
          doctest::Approx(5e-5));
    CHECK(harvested_energy_subslot(1, 0.0, 1, 3, 1) == 0.0);
    CHECK_THROWS_AS(harvested_energy_subslot(1, 1, 1, 0, 1),
                    std::invalid_argument);
}

TEST_CASE("total harvested energy and the Eq-style upper bound") {
    double pa = 0.1;
    // Uniform power attains the bound with equality.
    Eigen::VectorXd uniform = Eigen::VectorXd::Constant(4, pa);
    double e = total_harvested(0.02, uniform, 0.7, 4, 0.5);
    CHECK(e == doctest::Approx(0.5 * 0.02 * pa * 0.7).epsilon(1e-12));

    CHECK(total_harvested(1.0, vec({2.0, 0.0}), 0.5, 2, 1.0) ==
          doctest::Approx(0.5));
    CHECK(total_harvested(1.0, vec({0.0, 0.0}), 0.5, 2, 1.0) == 0.0);

    // Any budget-respecting profile stays below the bound.
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXd p(4);
        for (int i = 0; i < 4; ++i) p[i] = u(rng) * pa;
        double scale = 4.0 * pa / std::max(p.sum(), 1e-12);
        if (scale < 1.0) p *= scale;
        double tot = total_harvested(0.02, p, 0.7, 4, 0.5);
        CHECK(tot <= 0.5 * 0.02 * pa * 0.7 * (1.0 + 1e-12));
    }
}

TEST_CASE("rate conventions") {
    double c = std::exp(2.0) - 1.0;  // h*p/N0 = e^2-1 at h=1, N0=1
    CHECK(rate(0.5, 1.0, c, 1.0) == doctest::Approx(1.0));
    CHECK(rate(0.0, 1.0, 123.0, 1.0) == 0.0);
    CHECK(rate(0.3, 1.0, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(rate(0.1, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("rate is nondecreasing in duration and power") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 500; ++it) {
        double tau = 0.01 + u(rng) * 0.9;
        double h = 1e-4 + u(rng);
        double p = u(rng);
        double n0 = 1e-19;
        CHECK(rate(tau + 0.01, h, p, n0) >= rate(tau, h, p, n0));
        CHECK(rate(tau, h, p + 0.01, n0) >= rate(tau, h, p, n0));
    }
}

TEST_CASE("sum_rate: symmetry, zeros, hand cross-check") {
    auto cfg = fig_config({10.0, 10.0, 10.0});
    ChannelRealization ch;
    ch.h_dl = vec({0.01, 0.01, 0.01});
    ch.h_ul = ch.h_dl;
    Schedule s;
    s.tau_d = 0.4;
    s.p_dl = Eigen::VectorXd::Constant(3, cfg.avg_dl_power_w);
    s.tau_ul = Eigen::VectorXd::Constant(3, 0.2);
    s.p_ul = Eigen::VectorXd::Constant(3, 1e-4);
    double single = rate(0.2, 0.01, 1e-4, cfg.noise_power_w);
    CHECK(sum_rate(s, ch, cfg) == doctest::Approx(3.0 * single));

    s.tau_ul.setZero();
    CHECK(sum_rate(s, ch, cfg) == 0.0);

    // Independent scalar recomputation of a hand-built K=2 point.
    auto cfg2 = fig_config({5.0, 15.0});
    ChannelRealization ch2;
    ch2.h_dl = vec({0.03, 0.002});
    ch2.h_ul = ch2.h_dl;
    Schedule s2;
    s2.tau_d = 0.3;
    s2.p_dl = vec({0.15, 0.05});
    s2.tau_ul = vec({0.5, 0.2});
    s2.p_ul = vec({2e-4, 5e-5});
    double expected = 0.5 * std::log1p(0.03 * 2e-4 / cfg2.noise_power_w) +
                      0.2 * std::log1p(0.002 * 5e-5 / cfg2.noise_power_w);
    CHECK(sum_rate(s2, ch2, cfg2) == doctest::Approx(expected).epsilon(1e-14));

    Schedule bad = s2;
    bad.tau_ul = vec({0.5});
    CHECK_THROWS_AS(sum_rate(bad, ch2, cfg2), std::invalid_argument);
}

namespace {

// ERA operating point: uniform power, equal uplink slots, C5 tight.
Schedule era_point(double tau_d, const ChannelRealization& ch,
                   const SystemConfig& cfg) {
    const int k = cfg.num_users;
    Schedule s;
    s.tau_d = tau_d;
    s.p_dl = Eigen::VectorXd::Constant(k, cfg.avg_dl_power_w);
    s.tau_ul = Eigen::VectorXd::Constant(k, (1.0 - tau_d) / k);
    s.p_ul.resize(k);
    for (int i = 0; i < k; ++i) {
        double e = total_harvested(ch.h_dl[i], s.p_dl, tau_d, k,
                                   cfg.harvest_efficiency);
        s.p_ul[i] = std::max(e / s.tau_ul[i] - cfg.circuit_power_w[i], 0.0);
    }
    return s;
}

}  // namespace

TEST_CASE("constraint_residuals: ERA point feasible for every alpha") {
    auto topo = Topology{vec({5.0, 10.0, 15.0}), 2.0};
    auto ch = sample_channel(topo, 11, 0);
    for (double alpha : {0.1, 0.3, 0.5, 0.75, 1.0}) {
        auto cfg = fig_config({5.0, 10.0, 15.0}, 4.0, alpha);
        Schedule s = era_point(0.35, ch, cfg);
        auto rep = constraint_residuals(s, ch, cfg);
        CHECK(rep.feasible);
        CHECK(rep.max_residual <= 1e-9);
    }
}

TEST_CASE("constraint_residuals: named violations") {
    auto cfg = fig_config({5.0, 10.0});
    cfg.peak_dl_power_w = 1.0;  // 1 W peak so the C4 example residual is +1
    auto ch = sample_channel(cfg.topology, 11, 0);

    Schedule s = era_point(0.3, ch, cfg);
    s.tau_ul.setConstant((1.1 - s.tau_d) / 2.0);  // time sum 1.1
    auto rep = constraint_residuals(s, ch, cfg);
    CHECK(rep.find("C2")->residual == doctest::Approx(0.1));
    CHECK_FALSE(rep.feasible);

    Schedule s2 = era_point(0.3, ch, cfg);
    s2.p_dl[0] = cfg.peak_dl_power_w + 1.0;
    auto rep2 = constraint_residuals(s2, ch, cfg);
    CHECK(rep2.find("C4")->residual == doctest::Approx(1.0));
}

TEST_CASE("constraint_residuals: alpha = 0 equal-split convention") {
    auto cfg = fig_config({5.0, 10.0}, 4.0, 0.0);
    auto ch = sample_channel(cfg.topology, 13, 0);
    Schedule s = era_point(0.4, ch, cfg);
    auto rep = constraint_residuals(s, ch, cfg);
    CHECK(rep.feasible);

    s.tau_ul[0] += 0.05;
    s.tau_ul[1] -= 0.05;
    auto rep2 = constraint_residuals(s, ch, cfg);
    CHECK_FALSE(rep2.feasible);
}

TEST_CASE("downlink energy budget bound when configured") {
    auto cfg = fig_config({5.0, 10.0});
    auto ch = sample_channel(cfg.topology, 17, 0);
    Schedule s = era_point(0.5, ch, cfg);
    CHECK(constraint_residuals(s, ch, cfg).feasible);
    cfg.dl_energy_budget_j = 0.4 * cfg.avg_dl_power_w;  // tau_d <= 0.4
    auto rep = constraint_residuals(s, ch, cfg);
    CHECK_FALSE(rep.feasible);
    CHECK(rep.find("ED")->residual == doctest::Approx(0.25));
}

TEST_CASE("config validation names the offending field") {
    auto cfg = fig_config({5.0});
    cfg.alpha = 1.5;
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         "config.alpha: must lie in [0,1]",
                         std::invalid_argument);
    cfg = fig_config({5.0});
    cfg.peak_dl_power_w = cfg.avg_dl_power_w / 2.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("midpoint concavity of the reduced objective in tau_d") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto cfg = fig_config({5.0, 10.0, 15.0}, 4.0, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        auto ch = sample_channel(cfg.topology, 19, trial);
        auto prob = make_problem(ch, cfg);
        // Random fixed power levels above the modulation floor.
        Eigen::VectorXd x(3);
        for (int i = 0; i < 3; ++i) x[i] = u(rng);
        x *= cfg.alpha * 3.0 * cfg.avg_dl_power_w / x.sum();
        Eigen::VectorXd p =
            ((1.0 - cfg.alpha) * cfg.avg_dl_power_w + x.array()).matrix();
        for (int probe = 0; probe < 10; ++probe) {
            double a = 0.01 + 0.98 * u(rng);
            double b = 0.01 + 0.98 * u(rng);
            double mid = reduced_objective(0.5 * (a + b), p, prob);
            double ends = 0.5 * (reduced_objective(a, p, prob) +
                                 reduced_objective(b, p, prob));
            CHECK(mid >= ends - 1e-9);
        }
    }
}
