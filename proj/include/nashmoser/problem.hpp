#pragma once

#include <array>
#include <memory>
#include <string>

#include "nashmoser/graded_space.hpp"

namespace nashmoser {

/// Hypothesis parameters of one problem instance: a constant per tame
/// condition (1)..(7), the derivative-loss index d, the Taylor/domain index l,
/// the loss slope lambda and the Neumann growth exponent m.
struct ProblemConstants {
    std::array<double, 7> C{1, 1, 1, 1, 1, 1, 1};
    double d = 0.0;
    double l = 0.0;
    double lambda = 1.0;
    double m = 0.0;

    /// Throws ErrorCode::invalid_argument unless 1 <= lambda < 2, d, l, m >= 0, C > 0.
    void validate() const;
};

nlohmann::json to_json(const ProblemConstants& c);

/// phi: E -> F with phi(0) = 0, its derivative, and an approximate right
/// inverse L(x) of phi'(x), linear in its second argument. E and F share the
/// element type; mean_free() problems live on the mean-zero subspace.
class TameProblem {
public:
    explicit TameProblem(ProblemConstants constants);
    virtual ~TameProblem() = default;

    virtual std::string id() const = 0;
    virtual int order() const = 0;
    virtual bool mean_free() const { return false; }

    virtual GradedElement apply(const GradedElement& x) const = 0;
    virtual GradedElement derivative(const GradedElement& x, const GradedElement& v) const = 0;
    virtual GradedElement approx_inverse(const GradedElement& x, const GradedElement& y) const = 0;

    /// Problem-specific description for reports.
    virtual nlohmann::json describe() const;

    const ProblemConstants& constants() const noexcept { return constants_; }
    double domain_index() const noexcept { return constants_.l; }

    /// |x|_l < 1
    bool in_domain(const GradedElement& x) const;

private:
    ProblemConstants constants_;
};

using ProblemPtr = std::shared_ptr<const TameProblem>;

/// Throws ErrorCode::left_domain ("outside U") unless |x|_l < 1.
void require_in_domain(const TameProblem& problem, const GradedElement& x);

/// R(x, v) = phi(x+v) - phi(x) - phi'(x)v. Requires x and x+v in U.
GradedElement remainder(const TameProblem& problem, const GradedElement& x, const GradedElement& v);

/// (phi'(x) L(x) - I) y. Requires x in U.
GradedElement defect(const TameProblem& problem, const GradedElement& x, const GradedElement& y);

}  // namespace nashmoser
