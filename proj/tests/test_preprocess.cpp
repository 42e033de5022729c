#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "marketcast/preprocess.hpp"
#include "test_support.hpp"

using namespace marketcast;

TEST_CASE("log_returns closed-form values") {
    const std::vector<double> closes{100.0, 110.0};
    const auto returns = log_returns(closes);
    REQUIRE(returns.size() == 1);
    CHECK(returns[0] == doctest::Approx(0.0953102).epsilon(1e-6));
}

TEST_CASE("log_returns of a constant series is zero") {
    const std::vector<double> closes{5.0, 5.0, 5.0};
    const auto returns = log_returns(closes);
    CHECK(returns == std::vector<double>{0.0, 0.0});
}

TEST_CASE("log_returns rejects nonpositive prices") {
    CHECK_THROWS_AS(log_returns(std::vector<double>{100.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(log_returns(std::vector<double>{42.0}), std::invalid_argument);
}

TEST_CASE("log_returns of an exponential trend is constant") {
    const double growth = 1.013;
    std::vector<double> closes{250.0};
    for (int i = 0; i < 30; ++i) closes.push_back(closes.back() * growth);
    for (double r : log_returns(closes)) {
        CHECK(r == doctest::Approx(std::log(growth)).epsilon(1e-12));
    }
}

TEST_CASE("fit_scaler finds the data range") {
    const std::vector<double> x{2.0, 4.0, 6.0};
    const MinMaxScaler scaler = fit_scaler(x);
    CHECK(scaler.lo() == 2.0);
    CHECK(scaler.hi() == 6.0);
    CHECK(scaler.transform(x) == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("fit_scaler rejects constant and too-short input") {
    CHECK_THROWS_AS(fit_scaler(std::vector<double>{7.0, 7.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_scaler(std::vector<double>{7.0}), std::invalid_argument);
}

TEST_CASE("fit_scaler bounds match a brute-force scan") {
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> x(5 + rng.below(40));
        for (double& v : x) v = rng.uniform(-50.0, 50.0);
        double lo = x[0], hi = x[0];
        for (double v : x) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
        const MinMaxScaler scaler = fit_scaler(x);
        CHECK(scaler.lo() == lo);
        CHECK(scaler.hi() == hi);
    }
}

TEST_CASE("transform round-trips through inverse_transform") {
    Rng rng(3);
    std::vector<double> x(64);
    for (double& v : x) v = rng.uniform(-10.0, 25.0);
    const MinMaxScaler scaler = fit_scaler(x);
    const auto round_trip = scaler.inverse_transform(scaler.transform(x));
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(round_trip[i] == doctest::Approx(x[i]).epsilon(1e-12));
    }
}

TEST_CASE("train-fitted scaler passes out-of-range test values through unclipped") {
    const MinMaxScaler scaler(10.0, 20.0);
    CHECK(scaler.transform(25.0) == doctest::Approx(1.5));
    CHECK(scaler.inverse_transform(1.5) == doctest::Approx(25.0));
}

TEST_CASE("scaler bounds depend only on the training slice") {
    // leakage sentinel: changing test-segment values must not move lo/hi
    Rng rng(17);
    std::vector<double> series(100);
    for (double& v : series) v = rng.uniform(0.0, 1.0);
    const std::span<const double> train(series.data(), 80);
    const MinMaxScaler before = fit_scaler(train);
    for (std::size_t i = 80; i < 100; ++i) series[i] = 1000.0 + static_cast<double>(i);
    const MinMaxScaler after = fit_scaler(train);
    CHECK(before.lo() == after.lo());
    CHECK(before.hi() == after.hi());
}
