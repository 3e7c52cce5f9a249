#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nashmoser/error.hpp"
#include "nashmoser/problems.hpp"
#include "nashmoser/spectral.hpp"
#include "support.hpp"

using namespace nashmoser;

namespace {

SmallDivisorOptions fixed(double lambda = 1.0, double m = 0.0) {
    SmallDivisorOptions o;
    o.lambda = lambda;
    o.m = m;
    return o;
}

// (phi(x + h v) - phi(x - h v)) / 2h against phi'(x) v
double derivative_mismatch(const TameProblem& p, const GradedElement& x, const GradedElement& v) {
    const double h = 1e-5;
    const GradedElement fd = (1.0 / (2 * h)) * (p.apply(x + h * v) - p.apply(x - h * v));
    return testing::max_abs_diff(fd, p.derivative(x, v));
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("P0 is the identity with exact inverse") {
    const ProblemPtr p = make_p0(8);
    const GradedElement x = testing::sample(8, 1, 1.0);
    CHECK(p->apply(x) == x);
    CHECK(defect(*p, 0.1 * x, x).is_zero());
    CHECK(p->constants().d == 0.0);
    CHECK(p->id() == "P0");
}

TEST_CASE("P1 matches a direct evaluation") {
    const int n = 6;
    const double eps = 0.1;
    const ProblemPtr p = make_p1(n, eps);
    const GradedElement x = testing::sample(n, 2, 0.5);
    GradedElement gx(n);
    for (int k = -n; k <= n; ++k) gx.set(k, x.at(k) / ((1.0 + std::abs(k)) * (1.0 + std::abs(k))));
    GradedElement expected = x;
    for (int k = -n; k <= n; ++k) {
        Coeff acc{};
        for (int j = -n; j <= n; ++j) {
            if (std::abs(k - j) <= n) acc += gx.at(j) * gx.at(k - j);
        }
        expected.set(k, x.at(k) + eps * acc);
    }
    CHECK(testing::max_abs_diff(p->apply(x), expected) < 1e-15);
    CHECK(derivative_mismatch(*p, x, testing::sample(n, 3, 0.5)) < 1e-9);
    CHECK_THROWS_AS(make_p1(4, -1.0), Error);
}

TEST_CASE("P2 and P3 map zero to zero and stay mean free") {
    const GradedElement zero(16);
    for (const ProblemPtr& p : {make_p2(16, 1e-2, golden_mean(), fixed()), make_p3(16, 1e-2, golden_mean(), fixed())}) {
        CHECK(p->apply(zero).is_zero());
        CHECK(p->mean_free());
        const GradedElement u = 0.01 * testing::sample(16, 4, 3.0, true);
        CHECK(p->apply(u).at(0) == Coeff{});
        CHECK(derivative_mismatch(*p, u, testing::sample(16, 5, 3.0, true)) < 1e-9);
    }
}

TEST_CASE("P2 rotation part is inverted exactly by L") {
    const ProblemPtr p = make_p2(16, 0.0, golden_mean(), fixed());
    const GradedElement y = testing::sample(16, 6, 2.0, true);
    CHECK(testing::max_abs_diff(p->apply(p->approx_inverse(GradedElement(16), y)), y) < 1e-13);
    // single mode: (e^{2 pi i k alpha} - 1) c_k
    const GradedElement u = GradedElement::mode(16, 3, 1.0);
    const Coeff expected = std::polar(1.0, 2 * std::numbers::pi * 3 * golden_mean()) - 1.0;
    CHECK(std::abs(p->apply(u).at(3) - expected) < 1e-15);
}

TEST_CASE("P2 defect is first order in epsilon") {
    const GradedElement x = 0.05 * testing::sample(16, 7, 4.0, true);
    const GradedElement y = testing::sample(16, 8, 4.0, true);
    const double small = seminorm(defect(*make_p2(16, 1e-4, golden_mean(), fixed()), x, y), 2);
    const double large = seminorm(defect(*make_p2(16, 1e-2, golden_mean(), fixed()), x, y), 2);
    CHECK(large / small == doctest::Approx(100.0).epsilon(1e-6));
}

TEST_CASE("P3 composition term at u = 0 is eps sin t") {
    const GradedElement c = p3_composition(GradedElement(8), 0.1);
    CHECK(std::abs(c.at(1) - Coeff{0.0, -0.05}) < 1e-15);
    CHECK(std::abs(c.at(-1) - Coeff{0.0, 0.05}) < 1e-15);
    CHECK(std::abs(c.at(2)) < 1e-15);
}

TEST_CASE("rational rotation violates the divisor floor") {
    try {
        make_p2(16, 1e-3, 0.5, fixed());
        FAIL("expected divisor floor violation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::divisor_floor);
        CHECK(std::string(e.what()).find("divisor floor violated") != std::string::npos);
    }
}

TEST_CASE("divisor scan and golden mean") {
    CHECK(golden_mean() == doctest::Approx(0.6180339887498949));
    const DivisorScan scan = scan_divisors(golden_mean(), 128, 2.0);
    CHECK(scan.floor > 1e-6);
    CHECK(scan.argmin >= 1);
    CHECK(scan_divisors(1.0 / 3.0, 8, 0.0).floor < 1e-12);
}

TEST_CASE("unset lambda and m are measured") {
    const ProblemPtr p = make_p2(32, 1e-3, golden_mean());
    CHECK(p->constants().lambda == doctest::Approx(1.0));
    CHECK(p->constants().m >= 0.0);
    CHECK(p->constants().m < 0.1);
}

TEST_CASE("make_problem dispatches on the id") {
    ProblemSpec spec;
    spec.id = "P1";
    spec.order = 8;
    CHECK(make_problem(spec)->id() == "P1");
    spec.id = "P9";
    CHECK_THROWS_AS(make_problem(spec), Error);
}

}
