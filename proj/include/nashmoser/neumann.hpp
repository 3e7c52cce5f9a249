#pragma once

#include "nashmoser/graded_space.hpp"
#include "nashmoser/problem.hpp"

namespace nashmoser {

struct NeumannOptions {
    double tol = 1e-12;
    int max_terms = 200;
    int divergence_run = 5;  // consecutive growing terms that count as divergence
};

struct NeumannResult {
    GradedElement sum;
    int terms_used = 0;
    double final_term_norm = 0.0;  // |t_j|_d of the last term examined
    bool converged = false;
};

/// A(w) = w - phi'(x) L(x) w
GradedElement amplifier(const TameProblem& problem, const GradedElement& x, const GradedElement& w);

/// Sum_{l>=0} (S_theta A)^l z with t_0 = z, t_{j+1} = S_theta A t_j, stopped
/// once |t_j|_d <= tol * max(1, |sum|_d). Throws neumann_divergence when the
/// term norms grow divergence_run times in a row.
NeumannResult neumann_sum(const TameProblem& problem, const GradedElement& x, SmoothingParam theta,
                          const GradedElement& z, const NeumannOptions& options = {});

/// |sum|_n / (theta^m (|x|_n |z|_d + |z|_n)) with the problem's declared m.
double neumann_bound_ratio(const TameProblem& problem, const GradedElement& x,
                           SmoothingParam theta, const GradedElement& z, SeminormIndex n,
                           const NeumannOptions& options = {});

}  // namespace nashmoser
