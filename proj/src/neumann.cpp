#include "nashmoser/neumann.hpp"

#include <algorithm>
#include <cmath>

#include "nashmoser/error.hpp"

namespace nashmoser {

GradedElement amplifier(const TameProblem& problem, const GradedElement& x,
                        const GradedElement& w) {
    return w - problem.derivative(x, problem.approx_inverse(x, w));
}

NeumannResult neumann_sum(const TameProblem& problem, const GradedElement& x, SmoothingParam theta,
                          const GradedElement& z, const NeumannOptions& options) {
    if (!(options.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "Neumann tol must be > 0");
    if (options.max_terms < 1) throw Error(ErrorCode::invalid_argument, "max_terms must be >= 1");
    require_in_domain(problem, x);

    const double d = problem.constants().d;
    NeumannResult result{z, 1, seminorm(z, d), false};
    double sum_norm = result.final_term_norm;
    if (result.final_term_norm <= options.tol * std::max(1.0, sum_norm)) {
        result.converged = true;
        return result;
    }

    GradedElement term = z;
    double previous = result.final_term_norm;
    int growing = 0;
    while (result.terms_used < options.max_terms) {
        term = smooth(amplifier(problem, x, term), theta);
        const double norm = seminorm(term, d);
        result.final_term_norm = norm;
        if (!std::isfinite(norm)) {
            throw Error(ErrorCode::neumann_divergence, "Neumann divergence: non-finite term",
                        norm);
        }
        if (norm <= options.tol * std::max(1.0, sum_norm)) {
            result.converged = true;
            return result;
        }
        if (norm > previous) {
            if (++growing >= options.divergence_run) {
                const double ratio = norm / previous;
                throw Error(ErrorCode::neumann_divergence,
                            "Neumann divergence: term growth ratio " + std::to_string(ratio),
                            ratio);
            }
        } else {
            growing = 0;
        }
        previous = norm;
        result.sum += term;
        ++result.terms_used;
        sum_norm = seminorm(result.sum, d);
    }
    return result;
}

double neumann_bound_ratio(const TameProblem& problem, const GradedElement& x,
                           SmoothingParam theta, const GradedElement& z, SeminormIndex n,
                           const NeumannOptions& options) {
    if (z.is_zero()) throw Error(ErrorCode::degenerate_input, "degenerate input: z = 0");
    const NeumannResult r = neumann_sum(problem, x, theta, z, options);
    const double d = problem.constants().d;
    const double denom = std::pow(theta.value(), problem.constants().m) *
                         (seminorm(x, n) * seminorm(z, d) + seminorm(z, n));
    return seminorm(r.sum, n) / denom;
}

}  // namespace nashmoser
