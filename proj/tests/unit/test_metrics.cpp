#include <algorithm>

#include <doctest.h>

#include "error.hpp"
#include "metrics.hpp"
#include "rng.hpp"
#include "testutil.hpp"

using namespace fz;

TEST_CASE("smoothing a constant series returns the constant") {
    std::vector<double> series(50, 0.37);
    auto out = smooth_curve(series, 20);
    REQUIRE(out.size() == 31);
    for (double v : out) CHECK(v == doctest::Approx(0.37).epsilon(1e-15));
}

TEST_CASE("alternating series with width 2 averages to one half") {
    std::vector<double> series;
    for (int i = 0; i < 10; ++i) series.push_back(i % 2 == 0 ? 0.0 : 1.0);
    auto out = smooth_curve(series, 2);
    REQUIRE(out.size() == 9);
    for (double v : out) CHECK(v == 0.5);
}

TEST_CASE("smoothing matches the brute-force windowed mean on random series") {
    Rng rng(50);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t len = 5 + rng.next_below(60);
        const std::size_t width = 1 + rng.next_below(len);
        std::vector<double> series(len);
        for (double& v : series) v = rng.next_uniform();
        auto out = smooth_curve(series, width);
        REQUIRE(out.size() == len - width + 1);
        for (std::size_t i = 0; i < out.size(); ++i) {
            double acc = 0.0;
            for (std::size_t j = i; j < i + width; ++j) acc += series[j];
            CHECK(std::fabs(out[i] - acc / static_cast<double>(width)) < 1e-12);
        }
    }
}

TEST_CASE("smoothing a too-short series is a domain error") {
    std::vector<double> series(5, 1.0);
    CHECK_THROWS_AS(smooth_curve(series, 6), DomainError);
}

TEST_CASE("median of a constant series is that constant") {
    std::vector<double> series(800, 0.25);
    CHECK(median_window(series, 400, 800) == 0.25);
}

TEST_CASE("median of [0.1,0.2,0.3] over the full range is 0.2") {
    std::vector<double> series{0.1, 0.2, 0.3};
    CHECK(median_window(series, 1, 3) == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("median matches a sort-based oracle on random series") {
    Rng rng(51);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t len = 10 + rng.next_below(100);
        std::vector<double> series(len);
        for (double& v : series) v = rng.next_uniform();
        const std::size_t lo = 1 + rng.next_below(len - 2);
        const std::size_t hi = lo + 1 + rng.next_below(len - lo);

        std::vector<double> sorted(series.begin() + static_cast<std::ptrdiff_t>(lo - 1),
                                   series.begin() + static_cast<std::ptrdiff_t>(hi));
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        const double want =
            n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        CHECK(std::fabs(median_window(series, lo, hi) - want) < 1e-12);
    }
}

TEST_CASE("median range out of bounds is a domain error") {
    std::vector<double> series(10, 0.5);
    CHECK_THROWS_AS(median_window(series, 0, 5), DomainError);
    CHECK_THROWS_AS(median_window(series, 5, 5), DomainError);
    CHECK_THROWS_AS(median_window(series, 5, 11), DomainError);
}
