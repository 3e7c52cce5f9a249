#pragma once

#include <span>
#include <string>
#include <vector>

#include "nashmoser/solver.hpp"

namespace nashmoser {

enum class Quantity {
    growth_L,            // |x_p|_n <= K(n) theta_p^{L(n)} |y|_n
    residual_mu,         // |z_p|_d <= M theta_p^{-mu} |y|_{s0}
    residual_signature,  // log log (1/|z_p|_d) grows like p log tau
    residual_a,          // |z_p|_d <= C(a) |y|_{n(a)} theta_p^{-a}
    delta_domain,        // |x_p|_d < 1 for |y|_{s0} < delta
    all_index_b,         // |dx_p|_n <= C |y|_{sigma(n,b)} theta_p^{-b}
    cauchy,
    theorem_bound,       // |psi(y)|_d <= C |y|_{s0}
};

std::string_view to_string(Quantity q);

struct FitReport {
    Quantity quantity = Quantity::growth_L;
    double predicted = 0.0;
    double measured = 0.0;
    bool pass = false;
    int rows_used = 0;
    bool vacuous = false;  // passed without enough signal to test anything
    nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const FitReport& r);

/// Fit slack. Asymptotic bounds on 3..12 usable rows need explicit tolerances.
struct DiagnosticTolerances {
    double boundedness_slope = 0.05;  // max log-log slope of a ratio that should stay bounded
    double decay_slack = 0.25;        // measured decay >= (1 - slack) * predicted
    double trend_tol = 0.2;           // |slope| of the theorem ratio vs |y|_{s0}
    double residual_floor = 1e-14;    // residuals / increments below this are excluded
    double sup_growth = 10.0;         // max growth of consecutive partial suprema
};

/// Indices of rows with theta_p <= N+1 (and, if requested, |z_p|_d >= floor).
std::vector<std::size_t> usable_rows(const IterationTrace& trace, bool residual_above_floor,
                                     double floor = 1e-14);

/// |x_p|_n / (theta_p^{L(n)} |y|_n): pass iff its log-log slope <= boundedness_slope.
FitReport check_lemma1(const IterationTrace& trace, double n, const DerivedExponents& exps,
                       const DiagnosticTolerances& tol = {});

/// Decay exponent of |z_p|_d in theta_p: pass iff >= (1 - slack) mu.
FitReport check_lemma2(const IterationTrace& trace, const DerivedExponents& exps,
                       const DiagnosticTolerances& tol = {});

/// Slope of log log(1/|z_p|_d) against p over the pre-floor rows; pass iff
/// within [(1 - 0.5) log tau, (1 + 0.5) log tau].
FitReport check_double_exponential(const IterationTrace& trace, const DerivedExponents& exps,
                                   const DiagnosticTolerances& tol = {});

/// One report per a: sup_p |z_p|_d theta_p^a / |y|_{s0} must not jump by more
/// than sup_growth between consecutive usable rows. Empty a_grid means
/// {mu, mu + d + m, mu + 2(d + m)}.
std::vector<FitReport> check_lemma4(const IterationTrace& trace, const DerivedExponents& exps,
                                    std::vector<double> a_grid = {},
                                    const DiagnosticTolerances& tol = {});

/// Decay of |dx_p|_n for each n in n_grid (>= (1 - slack) b) and decreasing
/// tail sums sum_{j>=p} |dx_j|_n. Returns the all_index_b report followed by
/// the cauchy report.
std::vector<FitReport> check_lemma5_and_cauchy(const IterationTrace& trace,
                                               const std::vector<double>& n_grid, double b,
                                               const DiagnosticTolerances& tol = {});

struct SolvedPair {
    GradedElement y;
    GradedElement psi;
};

/// Ratio |psi(y)|_d / |y|_{s0} over >= 5 instances spanning >= 2 decades;
/// pass iff its log-log slope against |y|_{s0} is within +-trend_tol.
FitReport check_theorem_bound(std::span<const SolvedPair> solutions, double s0, double d,
                              const DiagnosticTolerances& tol = {});

/// Every recorded |x_p|_d < 1 over traces with |y|_{s0} < delta. Also reports
/// max sum_p |dx_p|_d / |y|_{s0}.
FitReport check_lemma3_domain(std::span<const IterationTrace> traces, double delta);

}  // namespace nashmoser
