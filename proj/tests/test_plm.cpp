#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "wpcn/plm.hpp"

using namespace wpcn;
using wpcn::test::fig_config;
using wpcn::test::vec;

TEST_CASE("encode: closed-form levels and budget pinning") {
    auto cfg = fig_config({5.0, 10.0}, 4.0, 0.5);
    cfg.avg_dl_power_w = 2.0;
    cfg.peak_dl_power_w = 8.0;
    ScheduleFractions f{vec({0.75, 0.25})};
    Eigen::VectorXd p = encode_schedule(f, cfg);
    CHECK(p[0] == doctest::Approx(2.5));
    CHECK(p[1] == doctest::Approx(1.5));
    CHECK(p.sum() == doctest::Approx(2.0 * cfg.avg_dl_power_w).epsilon(1e-14));
}

TEST_CASE("encode: uniform fractions give constant power for any alpha") {
    for (double alpha : {0.1, 0.5, 1.0}) {
        auto cfg = fig_config({5.0, 10.0, 15.0, 10.0}, 4.0, alpha);
        ScheduleFractions f{Eigen::VectorXd::Constant(4, 0.25)};
        Eigen::VectorXd p = encode_schedule(f, cfg);
        for (int i = 0; i < 4; ++i)
            CHECK(p[i] == doctest::Approx(cfg.avg_dl_power_w).epsilon(1e-14));
    }
}

TEST_CASE("encode: peak reached exactly at max_alpha with an indicator") {
    const int k = 5;
    auto cfg = fig_config({5.0, 10.0, 15.0, 10.0, 10.0}, 4.0, 1.0);
    cfg.alpha = max_alpha(k, cfg.peak_dl_power_w, cfg.avg_dl_power_w);
    CHECK(cfg.alpha == doctest::Approx(0.75));
    Eigen::VectorXd f = Eigen::VectorXd::Zero(k);
    f[0] = 1.0;
    Eigen::VectorXd p = encode_schedule(ScheduleFractions{f}, cfg);
    CHECK(p[0] == doctest::Approx(cfg.peak_dl_power_w).epsilon(1e-12));
}

TEST_CASE("encode: unrepresentable skew names the offending user") {
    auto cfg = fig_config({5.0, 10.0, 15.0, 10.0, 10.0}, 4.0, 1.0);
    Eigen::VectorXd f = Eigen::VectorXd::Zero(5);
    f[2] = 1.0;  // needs 5*P_A > P_P at alpha 1
    CHECK_THROWS_WITH_AS(encode_schedule(ScheduleFractions{f}, cfg),
                         "encode_schedule: unrepresentable schedule, user 2 "
                         "needs level above peak power",
                         std::invalid_argument);
}

TEST_CASE("decode: direct evaluation and scale invariance") {
    ScheduleFractions f = decode_schedule(MeasuredEnergies{vec({2.5, 1.5})}, 0.5);
    CHECK(f.f[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(f.f[1] == doctest::Approx(0.25).epsilon(1e-14));

    for (double c : {1e-9, 0.37, 1.0, 4000.0}) {
        auto scaled =
            decode_schedule(MeasuredEnergies{vec({2.5 * c, 1.5 * c})}, 0.5);
        CHECK(scaled.f[0] == doctest::Approx(f.f[0]).epsilon(1e-12));
        CHECK(scaled.f[1] == doctest::Approx(f.f[1]).epsilon(1e-12));
    }

    auto uniform =
        decode_schedule(MeasuredEnergies{Eigen::VectorXd::Constant(4, 0.8)}, 0.3);
    for (int i = 0; i < 4; ++i)
        CHECK(uniform.f[i] == doctest::Approx(0.25).epsilon(1e-14));

    CHECK_THROWS_WITH_AS(
        decode_schedule(MeasuredEnergies{Eigen::VectorXd::Zero(3)}, 0.5),
        "decode_schedule: no energy received", std::invalid_argument);
}

TEST_CASE("decode is total: adversarial inputs still yield valid fractions") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 2000; ++it) {
        int k = 2 + static_cast<int>(u(rng) * 6);
        double alpha = 0.05 + 0.95 * u(rng);
        Eigen::VectorXd e(k);
        for (int i = 0; i < k; ++i) e[i] = u(rng) < 0.3 ? 0.0 : u(rng);
        if (e.sum() <= 0.0) e[0] = 0.5;
        auto f = decode_schedule(MeasuredEnergies{e}, alpha);
        CHECK((f.f.array() >= 0.0).all());
        CHECK(f.f.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("round trip through simulated per-subslot measurements") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int it = 0; it < 2000; ++it) {
        int k = 2 + static_cast<int>(u(rng) * 5);
        double alpha = 0.05 + 0.95 * u(rng);
        // Generous peak so any fraction vector encodes.
        std::initializer_list<double> d0 = {5, 10, 15, 10, 10, 5, 5};
        std::vector<double> dist(d0.begin(), d0.begin() + k);
        SystemConfig cfg;
        cfg.topology.distances_m = Eigen::Map<const Eigen::VectorXd>(
            dist.data(), static_cast<long>(dist.size()));
        cfg.topology.path_loss_exponent = 2.0;
        cfg.num_users = k;
        cfg.avg_dl_power_w = 0.1;
        cfg.peak_dl_power_w = 0.1 * (1.0 + alpha * (k - 1)) * 1.0000001;
        cfg.alpha = alpha;
        cfg.harvest_efficiency = 0.5;
        cfg.noise_power_w = 1e-19;
        cfg.circuit_power_w = Eigen::VectorXd::Zero(k);

        Eigen::VectorXd raw(k);
        for (int i = 0; i < k; ++i) raw[i] = u(rng);
        ScheduleFractions f{raw / raw.sum()};

        Eigen::VectorXd p = encode_schedule(f, cfg);
        double tau_d = 0.01 + 0.98 * u(rng);
        double gain = 1e-4 + u(rng);  // one user's channel

        Eigen::VectorXd measured(k);
        for (int j = 0; j < k; ++j)
            measured[j] = harvested_energy_subslot(gain, p[j], tau_d, k,
                                                   cfg.harvest_efficiency);
        auto decoded = decode_schedule(MeasuredEnergies{measured}, alpha);
        for (int i = 0; i < k; ++i)
            CHECK(decoded.f[i] == doctest::Approx(f.f[i]).epsilon(1e-12));
    }
}

TEST_CASE("consensus: all users decode identical fractions") {
    auto cfg = fig_config({5.0, 10.0, 15.0}, 4.0, 0.4);
    ScheduleFractions f{vec({0.6, 0.3, 0.1})};
    Eigen::VectorXd p = encode_schedule(f, cfg);
    auto ch = sample_channel(cfg.topology, 77, 0);
    double tau_d = 0.3;
    ScheduleFractions first;
    for (int i = 0; i < 3; ++i) {
        Eigen::VectorXd measured(3);
        for (int j = 0; j < 3; ++j)
            measured[j] = harvested_energy_subslot(ch.h_dl[i], p[j], tau_d, 3,
                                                   cfg.harvest_efficiency);
        auto decoded = decode_schedule(MeasuredEnergies{measured}, cfg.alpha);
        if (i == 0) {
            first = decoded;
        } else {
            for (int j = 0; j < 3; ++j)
                CHECK(decoded.f[j] == doctest::Approx(first.f[j]).epsilon(1e-12));
        }
    }
}

TEST_CASE("max_alpha") {
    CHECK(max_alpha(5, 4.0, 1.0) == doctest::Approx(0.75));
    CHECK(max_alpha(2, 1.0, 1.0) == 0.0);
    CHECK(max_alpha(4, 4.0, 1.0) == 1.0);
    CHECK(max_alpha(1, 4.0, 1.0) == 1.0);
    CHECK_THROWS_AS(max_alpha(3, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("max_users") {
    CHECK(max_users(0.3, 4.0, 1.0) == 11);
    CHECK(max_users(1.0, 4.0, 1.0) == 4);
    CHECK(max_users(1.0, 1.0, 1.0) == 1);
    CHECK(max_users(0.0, 4.0, 1.0) == kNoUserLimit);
}

TEST_CASE("duality of the two admissibility bounds") {
    for (int k = 2; k <= 12; ++k) {
        for (double ppr : {1.5, 2.0, 4.0, 8.0}) {
            double a = max_alpha(k, ppr, 1.0);
            if (a <= 0.0) continue;
            CHECK(k <= max_users(a, ppr, 1.0));
        }
    }
}
