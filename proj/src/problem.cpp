#include "nashmoser/problem.hpp"

#include <cmath>

#include "nashmoser/error.hpp"

namespace nashmoser {

void ProblemConstants::validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::invalid_argument, what); };
    if (!(lambda >= 1.0 && lambda < 2.0)) bad("lambda must satisfy 1 <= lambda < 2");
    if (!(d >= 0.0) || !std::isfinite(d)) bad("d must be finite and >= 0");
    if (!(l >= 0.0) || !std::isfinite(l)) bad("l must be finite and >= 0");
    if (!(m >= 0.0) || !std::isfinite(m)) bad("m must be finite and >= 0");
    for (double c : C) {
        if (!(c > 0.0) || !std::isfinite(c)) bad("condition constants must be positive");
    }
}

nlohmann::json to_json(const ProblemConstants& c) {
    return {{"C", c.C}, {"d", c.d}, {"l", c.l}, {"lambda", c.lambda}, {"m", c.m}};
}

TameProblem::TameProblem(ProblemConstants constants) : constants_(constants) {
    constants_.validate();
}

nlohmann::json TameProblem::describe() const {
    return {{"id", id()}, {"N", order()}, {"constants", to_json(constants_)}};
}

bool TameProblem::in_domain(const GradedElement& x) const {
    return seminorm(x, constants_.l) < 1.0;
}

void require_in_domain(const TameProblem& problem, const GradedElement& x) {
    const double norm = seminorm(x, problem.domain_index());
    if (!(norm < 1.0)) {
        throw Error(ErrorCode::left_domain,
                    "outside U: |x|_l = " + std::to_string(norm) + " >= 1", norm);
    }
}

GradedElement remainder(const TameProblem& problem, const GradedElement& x,
                        const GradedElement& v) {
    require_in_domain(problem, x);
    const GradedElement moved = x + v;
    require_in_domain(problem, moved);
    return problem.apply(moved) - problem.apply(x) - problem.derivative(x, v);
}

GradedElement defect(const TameProblem& problem, const GradedElement& x, const GradedElement& y) {
    require_in_domain(problem, x);
    return problem.derivative(x, problem.approx_inverse(x, y)) - y;
}

}  // namespace nashmoser
