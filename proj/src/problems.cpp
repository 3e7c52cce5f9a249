#include "nashmoser/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nashmoser/error.hpp"
#include "nashmoser/spectral.hpp"

namespace nashmoser {
namespace {

GradedElement project_mean(GradedElement x) {
    x.set(0, Coeff{});
    return x;
}

class IdentityProblem final : public TameProblem {
public:
    explicit IdentityProblem(int order)
        : TameProblem(ProblemConstants{}), order_(order) {}

    std::string id() const override { return "P0"; }
    int order() const override { return order_; }
    GradedElement apply(const GradedElement& x) const override { return x; }
    GradedElement derivative(const GradedElement&, const GradedElement& v) const override { return v; }
    GradedElement approx_inverse(const GradedElement&, const GradedElement& y) const override {
        return y;
    }

private:
    int order_;
};

class QuadraticContraction final : public TameProblem {
public:
    QuadraticContraction(int order, double epsilon)
        : TameProblem(ProblemConstants{}), order_(order), epsilon_(epsilon) {
        if (!(epsilon >= 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be >= 0");
    }

    std::string id() const override { return "P1"; }
    int order() const override { return order_; }

    GradedElement apply(const GradedElement& x) const override {
        const GradedElement gx = regularize(x);
        return x + epsilon_ * product(gx, gx);
    }
    GradedElement derivative(const GradedElement& x, const GradedElement& v) const override {
        return v + (2.0 * epsilon_) * product(regularize(x), regularize(v));
    }
    GradedElement approx_inverse(const GradedElement&, const GradedElement& y) const override {
        return y;
    }
    nlohmann::json describe() const override {
        auto j = TameProblem::describe();
        j["epsilon"] = epsilon_;
        return j;
    }

private:
    // (G x)_k = x_k / (1+|k|)^2
    GradedElement regularize(const GradedElement& x) const {
        GradedElement out = x;
        for (int k = -order_; k <= order_; ++k) {
            out.set(k, x.at(k) / std::pow(1.0 + std::abs(k), 2.0));
        }
        return out;
    }

    int order_;
    double epsilon_;
};

/// Shared machinery of the rotation problems: the divisors e^{2 pi i k alpha} - 1
/// and the cohomological solve.
class RotationProblem : public TameProblem {
public:
    RotationProblem(int order, double epsilon, double alpha, ProblemConstants constants)
        : TameProblem(constants), order_(order), epsilon_(epsilon), alpha_(alpha) {
        if (!(epsilon >= 0.0)) throw Error(ErrorCode::invalid_argument, "epsilon must be >= 0");
        divisors_.resize(2 * static_cast<std::size_t>(order) + 1);
        for (int k = -order; k <= order; ++k) {
            divisors_[static_cast<std::size_t>(k + order)] =
                std::polar(1.0, 2.0 * std::numbers::pi * k * alpha) - 1.0;
        }
    }

    int order() const override { return order_; }
    bool mean_free() const override { return true; }

    GradedElement approx_inverse(const GradedElement&, const GradedElement& y) const override {
        GradedElement out(order_);
        for (int k = -order_; k <= order_; ++k) {
            if (k != 0) out.set(k, y.at(k) / divisor(k));
        }
        return out;
    }

    nlohmann::json describe() const override {
        auto j = TameProblem::describe();
        j["epsilon"] = epsilon_;
        j["alpha"] = alpha_;
        return j;
    }

protected:
    Coeff divisor(int k) const { return divisors_[static_cast<std::size_t>(k + order_)]; }

    // u(t + 2 pi alpha) - u(t)
    GradedElement rotate_minus_identity(const GradedElement& u) const {
        GradedElement out(order_);
        for (int k = -order_; k <= order_; ++k) out.set(k, divisor(k) * u.at(k));
        return out;
    }

    double epsilon() const { return epsilon_; }

private:
    int order_;
    double epsilon_;
    double alpha_;
    std::vector<Coeff> divisors_;
};

class SquareRotation final : public RotationProblem {
public:
    using RotationProblem::RotationProblem;

    std::string id() const override { return "P2"; }

    GradedElement apply(const GradedElement& u) const override {
        return project_mean(rotate_minus_identity(u) + epsilon() * product(u, u));
    }
    GradedElement derivative(const GradedElement& u, const GradedElement& v) const override {
        return project_mean(rotate_minus_identity(v) + (2.0 * epsilon()) * product(u, v));
    }
};

class SineRotation final : public RotationProblem {
public:
    using RotationProblem::RotationProblem;

    std::string id() const override { return "P3"; }

    GradedElement apply(const GradedElement& u) const override {
        const GradedElement centred =
            compose(u, [](double t, Coeff ut) { return std::sin(t + ut) - std::sin(t); });
        return project_mean(rotate_minus_identity(u) + epsilon() * centred);
    }
    GradedElement derivative(const GradedElement& u, const GradedElement& v) const override {
        const GradedElement linear =
            compose_times(u, v, [](double t, Coeff ut) { return std::cos(t + ut); });
        return project_mean(rotate_minus_identity(v) + epsilon() * linear);
    }
};

void check_divisors(int order, double alpha, const SmallDivisorOptions& options) {
    const DivisorScan scan = scan_divisors(alpha, order, options.d);
    if (!(scan.floor >= options.divisor_floor)) {
        throw Error(ErrorCode::divisor_floor,
                    "divisor floor violated: min |e^{2 pi i k alpha} - 1|(1+|k|)^d = " +
                        std::to_string(scan.floor) + " at k = " + std::to_string(scan.argmin),
                    scan.floor);
    }
}

template <class Problem>
ProblemPtr make_rotation(int order, double epsilon, double alpha, const SmallDivisorOptions& options) {
    check_divisors(order, alpha, options);
    ProblemConstants constants;
    constants.d = options.d;
    constants.l = options.l;
    constants.lambda = options.lambda.value_or(1.0);
    constants.m = options.m.value_or(0.0);
    auto provisional = std::make_shared<Problem>(order, epsilon, alpha, constants);
    if (options.lambda && options.m) return provisional;

    if (!options.lambda) {
        const ConditionReport growth = estimate_condition(*provisional, 5, options.calibration);
        const double lambda_hat = growth.estimated_exponent.value_or(2.0);
        if (!(lambda_hat < 2.0)) {
            throw Error(ErrorCode::lambda_out_of_range,
                        "estimated lambda >= 2: instance rejected", lambda_hat);
        }
        constants.lambda = lambda_hat;
    }
    if (!options.m) {
        const auto measured = std::make_shared<Problem>(order, epsilon, alpha, constants);
        const ConditionReport neumann = estimate_condition(*measured, 7, options.calibration);
        constants.m = std::max(0.0, neumann.estimated_exponent.value_or(0.0));
    }
    return std::make_shared<Problem>(order, epsilon, alpha, constants);
}

}  // namespace

double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

DivisorScan scan_divisors(double alpha, int order, double d) {
    DivisorScan scan{std::numeric_limits<double>::infinity(), 0};
    for (int k = 1; k <= order; ++k) {
        const double weighted = std::abs(std::polar(1.0, 2.0 * std::numbers::pi * k * alpha) - 1.0) *
                                std::pow(1.0 + k, d);
        if (weighted < scan.floor) scan = {weighted, k};
    }
    return scan;
}

ProblemPtr make_p0(int order) { return std::make_shared<IdentityProblem>(order); }

ProblemPtr make_p1(int order, double epsilon) {
    return std::make_shared<QuadraticContraction>(order, epsilon);
}

ProblemPtr make_p2(int order, double epsilon, double alpha, const SmallDivisorOptions& options) {
    return make_rotation<SquareRotation>(order, epsilon, alpha, options);
}

ProblemPtr make_p3(int order, double epsilon, double alpha, const SmallDivisorOptions& options) {
    return make_rotation<SineRotation>(order, epsilon, alpha, options);
}

GradedElement p3_composition(const GradedElement& u, double epsilon) {
    return epsilon * compose(u, [](double t, Coeff ut) { return std::sin(t + ut); });
}

ProblemPtr make_problem(const ProblemSpec& spec) {
    if (spec.id == "P0") return make_p0(spec.order);
    if (spec.id == "P1") return make_p1(spec.order, spec.epsilon);
    if (spec.id == "P2") return make_p2(spec.order, spec.epsilon, spec.alpha, spec.small_divisor);
    if (spec.id == "P3") return make_p3(spec.order, spec.epsilon, spec.alpha, spec.small_divisor);
    throw Error(ErrorCode::config, "unknown problem id '" + spec.id + "'");
}

}  // namespace nashmoser
