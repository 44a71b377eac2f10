#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "wpcn/channel.hpp"

using namespace wpcn;
using wpcn::test::vec;

TEST_CASE("path_loss_gain follows the power law") {
    CHECK(path_loss_gain(1.0, 2.0) == doctest::Approx(1.0));
    CHECK(path_loss_gain(10.0, 2.0) == doctest::Approx(0.01));
    CHECK(path_loss_gain(5.0, 2.0) == doctest::Approx(0.04));
    CHECK_THROWS_AS(path_loss_gain(0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(path_loss_gain(-1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(path_loss_gain(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("sample_channel is deterministic and reciprocal") {
    Topology topo{vec({5.0, 10.0, 15.0}), 2.0};
    auto a = sample_channel(topo, 42, 7);
    auto b = sample_channel(topo, 42, 7);
    CHECK((a.h_dl.array() == b.h_dl.array()).all());  // bit-identical
    CHECK((a.h_ul.array() == a.h_dl.array()).all());
    CHECK((a.h_dl.array() > 0.0).all());

    auto c = sample_channel(topo, 42, 8);
    CHECK((a.h_dl.array() != c.h_dl.array()).any());
    auto d = sample_channel(topo, 43, 7);
    CHECK((a.h_dl.array() != d.h_dl.array()).any());
}

TEST_CASE("sample_channel is independent of call order") {
    Topology topo{vec({10.0}), 2.0};
    auto first = sample_channel(topo, 1, 100);
    for (int t = 0; t < 100; ++t) sample_channel(topo, 1, t);
    auto again = sample_channel(topo, 1, 100);
    CHECK((first.h_dl.array() == again.h_dl.array()).all());
}

TEST_CASE("empirical gain mean matches D^-gamma at unit-mean fading") {
    Topology topo{vec({10.0}), 2.0};
    const int n = 100000;
    double sum = 0.0;
    for (int t = 0; t < n; ++t) sum += sample_channel(topo, 9, t).h_dl[0];
    double mean = sum / n;
    CHECK(mean == doctest::Approx(0.01).epsilon(0.02));
}

TEST_CASE("fading magnitude matches Exp(1): KS distance below 0.01") {
    const int n = 100000;
    std::vector<double> samples(n);
    for (int t = 0; t < n; ++t)
        samples[t] = detail::unit_exponential(123, t, 0);
    std::sort(samples.begin(), samples.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        double cdf = 1.0 - std::exp(-samples[i]);
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        ks = std::max({ks, std::abs(cdf - lo), std::abs(cdf - hi)});
    }
    CHECK(ks < 0.01);
}

TEST_CASE("topology validation") {
    CHECK_THROWS_AS(sample_channel(Topology{vec({-1.0}), 2.0}, 0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_channel(Topology{vec({1.0}), -2.0}, 0, 0),
                    std::invalid_argument);
}
