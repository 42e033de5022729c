#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "marketcast/knn.hpp"
#include "test_support.hpp"

using namespace marketcast;

TEST_CASE("fit stores every window and successor") {
    const std::vector<double> y{1, 2, 3, 4, 5};
    const KnnModel model = fit_knn(y, KnnConfig{1, 2});
    REQUIRE(model.patterns.size() == 3);
    CHECK(model.patterns[0] == std::vector<double>{1, 2});
    CHECK(model.patterns[1] == std::vector<double>{2, 3});
    CHECK(model.patterns[2] == std::vector<double>{3, 4});
    CHECK(model.successors == std::vector<double>{3, 4, 5});
}

TEST_CASE("fit preconditions") {
    const std::vector<double> y{1, 2, 3, 4, 5};
    CHECK_THROWS_AS(fit_knn(y, KnnConfig{4, 2}), std::invalid_argument);  // k > patterns
    CHECK_THROWS_AS(fit_knn(std::vector<double>{1, 2}, KnnConfig{1, 2}), std::invalid_argument);
}

TEST_CASE("exact pattern match with k=1 returns its successor") {
    const std::vector<double> y{1, 2, 3, 4, 5};
    const KnnModel model = fit_knn(y, KnnConfig{1, 2});
    CHECK(predict_knn(model, std::vector<double>{2, 3}) == doctest::Approx(4.0));
}

TEST_CASE("k equal to the pattern count averages all successors") {
    const std::vector<double> y{1, 2, 3, 4, 5};
    const KnnModel model = fit_knn(y, KnnConfig{3, 2});
    CHECK(predict_knn(model, std::vector<double>{0, 0}) == doctest::Approx((3.0 + 4.0 + 5.0) / 3.0));
}

TEST_CASE("pattern and successor alignment on seeded series") {
    Rng rng(64);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(6));
        const std::size_t n = static_cast<std::size_t>(m) + 2 + rng.below(40);
        const auto y = sim::white_noise(rng, n);
        const KnnModel model = fit_knn(y, KnnConfig{1, m});
        REQUIRE(model.patterns.size() == n - static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < model.patterns.size(); ++i) {
            for (int j = 0; j < m; ++j) {
                CHECK(model.patterns[i][static_cast<std::size_t>(j)] ==
                      y[i + static_cast<std::size_t>(j)]);
            }
            CHECK(model.successors[i] == y[i + static_cast<std::size_t>(m)]);
        }
    }
}

TEST_CASE("prediction matches the exhaustive oracle") {
    Rng rng(129);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = 1 + static_cast<int>(rng.below(5));
        const auto y = sim::white_noise(rng, 40 + rng.below(60));
        for (int k : {1, 3, 5}) {
            if (y.size() - static_cast<std::size_t>(m) < static_cast<std::size_t>(k)) continue;
            const KnnModel model = fit_knn(y, KnnConfig{k, m});
            std::vector<double> query(static_cast<std::size_t>(m));
            for (double& q : query) q = rng.uniform(-2.0, 2.0);
            CHECK(predict_knn(model, query) ==
                  oracle::knn_direct(model.patterns, model.successors, query, k));
        }
    }
}

TEST_CASE("prediction stays within the successor range") {
    Rng rng(21);
    const auto y = sim::white_noise(rng, 120);
    const KnnModel model = fit_knn(y, KnnConfig{4, 3});
    const auto [lo, hi] = std::minmax_element(model.successors.begin(), model.successors.end());
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> query{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const double prediction = predict_knn(model, query);
        CHECK(prediction >= *lo);
        CHECK(prediction <= *hi);
    }
}

TEST_CASE("prediction is invariant to pattern storage order without ties") {
    Rng rng(5);
    const auto y = sim::white_noise(rng, 60);
    KnnModel model = fit_knn(y, KnnConfig{3, 2});
    std::vector<double> query{0.1, -0.2};
    const double before = predict_knn(model, query);

    KnnModel shuffled = model;
    std::vector<std::size_t> order(model.patterns.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
    for (std::size_t i = 0; i < order.size(); ++i) {
        shuffled.patterns[i] = model.patterns[order[i]];
        shuffled.successors[i] = model.successors[order[i]];
    }
    CHECK(predict_knn(shuffled, query) == doctest::Approx(before).epsilon(1e-15));
}

TEST_CASE("identical patterns make k irrelevant") {
    std::vector<double> y(30, 2.0);
    // constant series: every pattern equals every other
    const KnnModel small_k = fit_knn(y, KnnConfig{2, 3});
    const KnnModel large_k = fit_knn(y, KnnConfig{4, 3});
    const std::vector<double> query{2.0, 2.0, 2.0};
    CHECK(predict_knn(small_k, query) == predict_knn(large_k, query));
}

TEST_CASE("constant successors forecast flat") {
    std::vector<double> y(20, 3.5);
    const KnnModel model = fit_knn(y, KnnConfig{2, 4});
    for (double f : forecast_knn(model, 6)) CHECK(f == doctest::Approx(3.5));
}

TEST_CASE("one-step forecast equals predicting from the last window") {
    Rng rng(90);
    const auto y = sim::white_noise(rng, 50);
    const KnnModel model = fit_knn(y, KnnConfig{3, 4});
    const std::vector<double> last_window(y.end() - 4, y.end());
    CHECK(forecast_knn(model, 1)[0] == doctest::Approx(predict_knn(model, last_window)));
}

TEST_CASE("input scaling cannot change predictions") {
    // affine map shared by all coordinates: distances rescale uniformly and
    // the successor mean is affine-equivariant
    Rng rng(314);
    std::vector<double> y(80);
    for (double& v : y) v = rng.uniform(900.0, 1100.0);
    KnnConfig plain{4, 3, false};
    KnnConfig scaled{4, 3, true};
    const KnnModel a = fit_knn(y, plain);
    const KnnModel b = fit_knn(y, scaled);
    REQUIRE(b.scaler.has_value());
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> query{rng.uniform(900, 1100), rng.uniform(900, 1100),
                                  rng.uniform(900, 1100)};
        CHECK(predict_knn(b, query) == doctest::Approx(predict_knn(a, query)).epsilon(1e-10));
    }
    const auto fa = forecast_knn(a, 5);
    const auto fb = forecast_knn(b, 5);
    for (std::size_t h = 0; h < 5; ++h) CHECK(fb[h] == doctest::Approx(fa[h]).epsilon(1e-10));
}

TEST_CASE("a noiseless cycle is reproduced exactly") {
    // period-4 cycle, m=4, k=1: each window identifies its phase uniquely
    const std::vector<double> cycle{1.0, 5.0, 2.0, 8.0};
    std::vector<double> y;
    for (int r = 0; r < 6; ++r) y.insert(y.end(), cycle.begin(), cycle.end());
    const KnnModel model = fit_knn(y, KnnConfig{1, 4});
    const auto forecast = forecast_knn(model, 8);
    for (int h = 0; h < 8; ++h) {
        CHECK(forecast[static_cast<std::size_t>(h)] ==
              doctest::Approx(cycle[static_cast<std::size_t>(h % 4)]));
    }
}
