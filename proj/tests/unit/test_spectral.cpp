#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nashmoser/spectral.hpp"
#include "support.hpp"

using namespace nashmoser;

namespace {

// truncated convolution, computed directly
GradedElement convolve(const GradedElement& a, const GradedElement& b) {
    const int n = a.order();
    GradedElement out(n);
    for (int k = -n; k <= n; ++k) {
        Coeff acc{};
        for (int j = -n; j <= n; ++j) {
            if (std::abs(k - j) <= n) acc += a.at(j) * b.at(k - j);
        }
        out.set(k, acc);
    }
    return out;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("product equals the truncated convolution") {
    const GradedElement a = testing::sample(12, 1, 0.5);
    const GradedElement b = testing::sample(12, 2, 1.0);
    CHECK(testing::max_abs_diff(product(a, b), convolve(a, b)) < 1e-14);
}

TEST_CASE("grid size is a power of two covering the oversampled modes") {
    CHECK(SpectralGrid(128, 2).points() == 1024);
    CHECK(SpectralGrid(1, 2).points() == 8);
    CHECK(SpectralGrid(10, 4).points() == 128);
}

TEST_CASE("samples reproduce point values") {
    GradedElement x(4);
    x.set(1, 0.5);
    x.set(-1, 0.5);  // cos t
    const SpectralGrid grid(4);
    const auto s = grid.to_samples(x);
    for (int j = 0; j < grid.points(); ++j) {
        CHECK(std::abs(s[j] - std::cos(grid.node(j))) < 1e-15);
    }
    CHECK(testing::max_abs_diff(grid.from_samples(s), x) < 1e-16);
}

TEST_CASE("compose of u -> u^2 matches product") {
    const GradedElement u = testing::sample(16, 4, 2.0);
    const GradedElement sq = compose(u, [](double, Coeff v) { return v * v; });
    CHECK(testing::max_abs_diff(sq, product(u, u)) < 1e-15);
    const GradedElement v = testing::sample(16, 5, 2.0);
    const GradedElement uv = compose_times(u, v, [](double, Coeff w) { return w; });
    CHECK(testing::max_abs_diff(uv, product(u, v)) < 1e-15);
}

TEST_CASE("compose sees the grid variable") {
    GradedElement zero(3);
    const GradedElement s = compose(zero, [](double t, Coeff) { return std::sin(t); });
    CHECK(std::abs(s.at(1) - Coeff{0.0, -0.5}) < 1e-15);
    CHECK(std::abs(s.at(-1) - Coeff{0.0, 0.5}) < 1e-15);
    CHECK(std::abs(s.at(0)) < 1e-16);
}

TEST_CASE("quadratic products do not alias at twofold oversampling") {
    const GradedElement u = testing::sample(128, 6, 1.0, true);
    CHECK(testing::max_abs_diff(product(u, u, 2), product(u, u, 4)) <= 1e-12);
}

TEST_CASE("order mismatch is rejected") {
    CHECK_THROWS(product(GradedElement(3), GradedElement(4)));
    CHECK_THROWS(SpectralGrid(3).from_samples(std::vector<Coeff>(5)));
}

}
