#include <doctest.h>

#include <cmath>

#include "nashmoser/diagnostics.hpp"
#include "nashmoser/error.hpp"
#include "nashmoser/problems.hpp"
#include "support.hpp"

using namespace nashmoser;

namespace {

DerivedExponents exps_for(double d, double mu, double tau = 1.5) {
    DerivedExponents e;
    e.lambda = 1.0;
    e.tau = tau;
    e.d = d;
    e.mu = mu;
    e.s0 = 10.0;
    return e;
}

// Rows p = 0..count-1 with theta_p = 2^(tau^p) and |z_p|_d = theta_p^(-rate).
IterationTrace power_trace(int order, int count, double rate, double tau = 1.5) {
    IterationTrace t;
    t.order = order;
    t.d = 1.0;
    t.s0 = 10.0;
    t.y_d = 1.0;
    t.y_s0 = 1.0;
    for (int p = 0; p < count; ++p) {
        TraceRow row;
        row.p = p;
        row.theta = std::exp2(std::pow(tau, p));
        row.z_d = std::pow(row.theta, -rate);
        row.x_d = 0.5 * (1.0 - row.z_d);
        row.x_s0 = row.x_d;
        row.dx_d = 0.5 * row.z_d;
        t.rows.push_back(row);
    }
    return t;
}

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("usable rows stop at theta > N + 1 and at the floor") {
    IterationTrace t = power_trace(8, 6, 4.0);  // theta: 2, 2.8, 4.8, 9.5, 27.4, 147
    CHECK(usable_rows(t, false).size() == 3);
    t.order = 1000;
    CHECK(usable_rows(t, false).size() == 6);
    CHECK(usable_rows(t, true, 1e-3).size() == 3);  // 9.5^-4 < 1e-3
}

TEST_CASE("residual decay recovers the exact rate") {
    const IterationTrace t = power_trace(1000, 6, 5.0);
    const FitReport r = check_lemma2(t, exps_for(1.0, 5.0));
    CHECK(r.measured == doctest::Approx(5.0));
    CHECK(r.pass);
    CHECK(r.details["M_hat"].get<double>() == doctest::Approx(1.0));
    CHECK_FALSE(check_lemma2(power_trace(1000, 6, 3.0), exps_for(1.0, 5.0)).pass);  // 3 < 0.75 * 5
}

TEST_CASE("residual decay with mu = 0 is vacuous") {
    const FitReport r = check_lemma2(power_trace(1000, 2, 1.0), exps_for(0.0, 0.0));
    CHECK(r.pass);
    CHECK(r.vacuous);
}

TEST_CASE("too few rows raise insufficient_rows") {
    try {
        check_lemma2(power_trace(1000, 2, 5.0), exps_for(1.0, 5.0));
        FAIL("expected insufficient rows");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::insufficient_rows);
        CHECK(e.value() == 2.0);
    }
}

TEST_CASE("double-exponential signature") {
    // log log (1/theta^-r) = p log tau + log(r log 2)
    const FitReport r = check_double_exponential(power_trace(1000, 6, 2.0), exps_for(1.0, 2.0));
    CHECK(r.measured == doctest::Approx(std::log(1.5)));
    CHECK(r.pass);
    IterationTrace linear = power_trace(1000, 6, 2.0);
    for (TraceRow& row : linear.rows) row.z_d = std::exp(-2.0 - 0.1 * row.p);  // geometric only
    CHECK_FALSE(check_double_exponential(linear, exps_for(1.0, 2.0)).pass);
}

TEST_CASE("growth bound slope") {
    IterationTrace t = power_trace(1000, 6, 2.0);
    const DerivedExponents e = exps_for(1.0, 2.0);
    const double L = e.growth_exponent(1.0);
    for (TraceRow& row : t.rows) row.x_d = 0.3 * std::pow(row.theta, L);
    FitReport r = check_lemma1(t, 1.0, e);
    CHECK(r.measured == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.details["K_hat"].get<double>() == doctest::Approx(0.3));
    CHECK(r.pass);
    for (TraceRow& row : t.rows) row.x_d = std::pow(row.theta, L + 1.0);
    r = check_lemma1(t, 1.0, e);
    CHECK(r.measured == doctest::Approx(1.0));
    CHECK_FALSE(r.pass);
    CHECK_THROWS_AS(check_lemma1(t, 3.0, e), Error);  // index not recorded
}

TEST_CASE("growth bound skips x = 0 and rejects y = 0") {
    IterationTrace t = power_trace(1000, 4, 2.0);
    t.rows[0].x_d = 0.0;
    CHECK(check_lemma1(t, 1.0, exps_for(1.0, 2.0)).rows_used == 3);
    t.y_d = 0.0;
    try {
        check_lemma1(t, 1.0, exps_for(1.0, 2.0));
        FAIL("expected degenerate input");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_input);
    }
}

TEST_CASE("rate-a partial suprema") {
    const IterationTrace t = power_trace(1000, 6, 5.0);
    const auto reports = check_lemma4(t, exps_for(1.0, 5.0), {0.0, 5.0, 20.0});
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].pass);  // a = 0: sup is the first residual
    CHECK(reports[0].measured == 1.0);
    CHECK(reports[1].pass);
    CHECK(reports[1].details["C_hat"].get<double>() == doctest::Approx(1.0));
    CHECK_FALSE(reports[2].pass);  // theta^15 grows fast
    CHECK(check_lemma4(t, exps_for(1.0, 5.0)).size() == 3);
}

TEST_CASE("increment decay and Cauchy tails") {
    const IterationTrace t = power_trace(1000, 6, 4.0);
    const auto r = check_lemma5_and_cauchy(t, {1.0}, 4.0);
    REQUIRE(r.size() == 2);
    CHECK(r[0].quantity == Quantity::all_index_b);
    CHECK(r[0].measured == doctest::Approx(4.0));
    CHECK(r[0].pass);
    CHECK(r[1].quantity == Quantity::cauchy);
    CHECK(r[1].pass);
    CHECK(r[1].measured < 1.0);
    CHECK_THROWS_AS(check_lemma5_and_cauchy(t, {}, 4.0), Error);
}

TEST_CASE("increment decay below the floor is vacuous") {
    IterationTrace t = power_trace(1000, 6, 4.0);
    for (TraceRow& row : t.rows) row.dx_d = 1e-20;
    const auto r = check_lemma5_and_cauchy(t, {1.0}, 4.0);
    CHECK(r[0].vacuous);
    CHECK(r[0].pass);
}

TEST_CASE("theorem bound on the identity") {
    // psi(y) = y for P0, so the ratio |y|_d / |y|_s0 is constant along a ray
    const GradedElement dir = testing::sample(8, 2, 2.0);
    std::vector<SolvedPair> pairs;
    for (int i = 0; i < 6; ++i) {
        const GradedElement y = std::pow(10.0, -0.5 * i) * dir;
        pairs.push_back({y, y});
    }
    const FitReport r = check_theorem_bound(pairs, 3.0, 0.0);
    CHECK(r.pass);
    CHECK(std::abs(r.details["trend_slope"].get<double>()) < 1e-12);
    CHECK(r.measured == doctest::Approx(seminorm(dir, 0.0) / seminorm(dir, 3.0)));

    // |psi| ~ |y|^2 is a trend
    for (SolvedPair& pair : pairs) pair.psi = seminorm(pair.y, 3.0) * pair.y;
    CHECK_FALSE(check_theorem_bound(pairs, 3.0, 0.0).pass);
}

TEST_CASE("theorem bound input checks") {
    std::vector<SolvedPair> zeros(6, SolvedPair{GradedElement(4), GradedElement(4)});
    try {
        check_theorem_bound(zeros, 3.0, 0.0);
        FAIL("expected degenerate input");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::degenerate_input);
    }
    const GradedElement y = GradedElement::mode(4, 1, 1.0);
    std::vector<SolvedPair> few(4, SolvedPair{y, y});
    CHECK_THROWS_AS(check_theorem_bound(few, 3.0, 0.0), Error);
    std::vector<SolvedPair> narrow;
    for (int i = 0; i < 6; ++i) narrow.push_back({(1.0 + i) * y, y});
    CHECK_THROWS_AS(check_theorem_bound(narrow, 3.0, 0.0), Error);
}

TEST_CASE("domain check over traces") {
    IterationTrace inside = power_trace(1000, 4, 2.0);
    inside.y_s0 = 0.1;
    IterationTrace outside = inside;
    outside.rows.back().x_d = 1.5;
    IterationTrace zero = inside;
    zero.y_s0 = 0.0;
    for (TraceRow& row : zero.rows) row.x_d = 0.0;

    std::vector<IterationTrace> good{inside, zero};
    FitReport r = check_lemma3_domain(good, 0.5);
    CHECK(r.pass);
    CHECK(r.details["traces_checked"].get<int>() == 2);
    std::vector<IterationTrace> bad{inside, outside};
    CHECK_FALSE(check_lemma3_domain(bad, 0.5).pass);
    r = check_lemma3_domain(bad, 0.05);  // nothing below delta
    CHECK(r.vacuous);
}

TEST_CASE("diagnostics on a real P1 solve are deterministic") {
    auto run = [] {
        const ProblemPtr p = make_p1(32, 0.1);
        const ScheduleParams params{1.0, 1.5};
        const DerivedExponents e = derive_exponents(p->constants(), params);
        SolverConfig c;
        c.residual_tol = 1e-13;
        const GradedElement y = scale_to(testing::sample(32, 5, 4.0), 0.0, 0.3);
        const SolveOutcome out = solve(*p, y, params, e, c);
        REQUIRE(out.ok());
        return to_json(check_lemma1(out.trace, e.d, e)).dump();
    };
    CHECK(run() == run());
}

TEST_CASE("quantity names") {
    CHECK(to_string(Quantity::growth_L) == "growth_L");
    CHECK(to_string(Quantity::theorem_bound) == "theorem_bound");
    FitReport r;
    r.quantity = Quantity::cauchy;
    CHECK(to_json(r)["quantity"] == "cauchy");
}

}
