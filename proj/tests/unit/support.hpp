#pragma once

#include <cmath>
#include <string>

#include "nashmoser/problem.hpp"
#include "nashmoser/sampling.hpp"

namespace testing {

using nashmoser::GradedElement;

/// phi(x) = a x with L = b I, so the amplifier is (1 - a b) I.
class ScaledIdentity final : public nashmoser::TameProblem {
public:
    ScaledIdentity(int order, double a, double b, nashmoser::ProblemConstants c = {})
        : TameProblem(c), order_(order), a_(a), b_(b) {}

    std::string id() const override { return "scaled"; }
    int order() const override { return order_; }
    GradedElement apply(const GradedElement& x) const override { return a_ * x; }
    GradedElement derivative(const GradedElement&, const GradedElement& v) const override { return a_ * v; }
    GradedElement approx_inverse(const GradedElement&, const GradedElement& y) const override { return b_ * y; }

private:
    int order_;
    double a_;
    double b_;
};

inline double max_abs_diff(const GradedElement& a, const GradedElement& b) {
    double worst = 0.0;
    for (int k = -a.order(); k <= a.order(); ++k) worst = std::max(worst, std::abs(a.at(k) - b.at(k)));
    return worst;
}

inline GradedElement sample(int order, std::uint64_t seed, double decay, bool mean_free = false) {
    nashmoser::Rng rng(seed);
    nashmoser::SampleShape shape;
    shape.decay = decay;
    shape.mean_free = mean_free;
    return nashmoser::random_element(order, rng, shape);
}

}  // namespace testing
