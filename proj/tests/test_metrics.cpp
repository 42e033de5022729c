#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "marketcast/metrics.hpp"
#include "test_support.hpp"

using namespace marketcast;

TEST_CASE("perfect forecast scores zero on all metrics") {
    const std::vector<double> v{1, 2, 3};
    CHECK(mae(v, v) == 0.0);
    CHECK(rmse(v, v) == 0.0);
    CHECK(mape(v, v) == 0.0);
}

TEST_CASE("hand-computed example") {
    const std::vector<double> actual{1, 2, 4};
    const std::vector<double> forecast{1, 2, 3};
    CHECK(mae(actual, forecast) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(rmse(actual, forecast) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(mape(actual, forecast) == doctest::Approx(100.0 * 0.25 / 3.0).epsilon(1e-12));
}

TEST_CASE("rmse dominates mae on random vectors") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(20);
        std::vector<double> a(n), f(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(0.5, 10.0);
            f[i] = rng.uniform(0.5, 10.0);
        }
        CHECK(rmse(a, f) >= mae(a, f) - 1e-15);
    }
}

TEST_CASE("metrics agree with the direct-summation oracle") {
    Rng rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.below(12);
        std::vector<double> a(n), f(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(0.1, 5.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            f[i] = rng.uniform(-5.0, 5.0);
        }
        CHECK(mae(a, f) == doctest::Approx(oracle::mae_direct(a, f)).epsilon(1e-12));
        CHECK(rmse(a, f) == doctest::Approx(oracle::rmse_direct(a, f)).epsilon(1e-12));
        CHECK(mape(a, f) == doctest::Approx(oracle::mape_direct(a, f)).epsilon(1e-12));
    }
}

TEST_CASE("metric error paths") {
    const std::vector<double> a{1, 2};
    const std::vector<double> shorter{1};
    CHECK_THROWS_AS(mae(a, shorter), std::invalid_argument);
    const std::vector<double> with_zero{0, 1};
    CHECK_THROWS_AS(mape(with_zero, a), std::invalid_argument);
}

TEST_CASE("avg_rel_mae basics") {
    const std::vector<double> bench{3.0, 7.0, 0.4};
    CHECK(avg_rel_mae(bench, bench) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(avg_rel_mae(std::vector<double>{2.0}, std::vector<double>{4.0}) ==
          doctest::Approx(0.5).epsilon(1e-12));

    // geometric-mean cancellation: ratios 2 and 0.5
    CHECK(avg_rel_mae(std::vector<double>{2.0, 1.0}, std::vector<double>{1.0, 2.0}) ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(avg_rel_mae(std::vector<double>{0.0}, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("avg_rel_mae is antisymmetric under swap") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(0.1, 4.0);
            b[i] = rng.uniform(0.1, 4.0);
        }
        CHECK(avg_rel_mae(a, b) * avg_rel_mae(b, a) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(avg_rel_mae(a, b) ==
              doctest::Approx(oracle::avg_rel_mae_direct(a, b)).epsilon(1e-12));
    }
}
