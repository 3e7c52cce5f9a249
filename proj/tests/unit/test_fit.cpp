#include <doctest.h>

#include <vector>

#include "nashmoser/error.hpp"
#include "nashmoser/fit.hpp"

using namespace nashmoser;

TEST_SUITE("diagnostics") {

TEST_CASE("line fit recovers an exact line") {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{1, -1, -3, -5};
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.points == 4);
}

TEST_CASE("line fit rejects degenerate abscissae and short input") {
    const std::vector<double> same{1, 1, 1};
    const std::vector<double> y{0, 1, 2};
    CHECK_THROWS_AS(fit_line(same, y), Error);
    const std::vector<double> one{1};
    CHECK_THROWS_AS(fit_line(one, one), Error);
}

}
