#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nashmoser/neumann.hpp"
#include "nashmoser/problem.hpp"

namespace nashmoser {

/// Smoothing schedule theta_p = 2^(tau^p) with 1 <= lambda < tau < 2.
struct ScheduleParams {
    double lambda = 1.0;
    double tau = 1.5;

    static ScheduleParams from_lambda(double lambda) { return {lambda, (lambda + 2.0) / 2.0}; }
    void validate() const;
};

double schedule(int p, const ScheduleParams& params);

/// Exponents governing the schedule and its guarantees.
struct DerivedExponents {
    double lambda = 1.0;
    double tau = 1.5;
    double d = 0.0;
    double m = 0.0;
    double mu = 0.0;      // residual decay rate (2+tau)/(2-tau) (d+m)
    double s = 0.0;       // smallest s >= d with s - d - m - L(lambda s + d) >= mu tau
    double s0 = 0.0;      // lambda s + d
    double delta = 1.0;   // min{1, (sum_j theta_j^{-(mu-d-m)})^{-1}}
    bool degenerate = false;  // mu - d - m <= 0: no decay guaranteed

    /// L(n) = (n/lambda)(lambda-1)/(tau-1) + (d+lambda)/(lambda(tau-1)) + m/(tau-1)
    double growth_exponent(double n) const;

    /// mu - d - m
    double summability_exponent() const { return mu - d - m; }
};

nlohmann::json to_json(const DerivedExponents& e);

DerivedExponents derive_exponents(const ProblemConstants& constants, const ScheduleParams& params);

struct IterationState {
    int p = 0;
    GradedElement x;
    GradedElement z;  // y - phi(x), recomputed from x after every step
    double theta = 2.0;
};

/// Byproducts of one step, kept for the trace.
struct StepRecord {
    GradedElement dx;
    int neumann_terms = 0;
    bool neumann_converged = true;
};

/// x_{p+1} = x_p + S_theta L(x_p) sum_l (S_theta A)^l z_p, z_{p+1} = y - phi(x_{p+1}).
/// Throws left_domain if x_{p+1} leaves U and neumann_divergence from the series.
IterationState step(const TameProblem& problem, const IterationState& state, const GradedElement& y,
                    const ScheduleParams& params, const NeumannOptions& neumann = {},
                    StepRecord* record = nullptr);

enum class SolveStatus { converged, left_domain, neumann_divergence, stagnation, max_iter, truncation_ceiling };

std::string_view to_string(SolveStatus status);

struct SolverConfig {
    double residual_tol = 1e-10;
    int max_iter = 30;
    int stagnation_steps = 3;
    NeumannOptions neumann;
    bool allow_outside_domain = false;  // skip the |y|_{s0} < delta entry check
    std::vector<double> n_grid;         // extra seminorm indices recorded per row
};

struct TraceRow {
    int p = 0;
    double theta = 0.0;
    double x_d = 0.0;
    double x_s0 = 0.0;
    double z_d = 0.0;
    double z_s0 = 0.0;
    std::vector<double> x_n;             // |x_p|_n over the n grid
    std::optional<double> dx_d;          // empty on the terminal row (no step taken)
    std::vector<double> dx_n;
    int neumann_terms = 0;
};

struct IterationTrace {
    int order = 0;
    double d = 0.0;
    double s0 = 0.0;
    std::vector<double> n_grid;
    double y_d = 0.0;
    double y_s0 = 0.0;
    std::vector<double> y_n;
    std::vector<TraceRow> rows;
    SolveStatus status = SolveStatus::converged;
    std::string message;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::converged;
    GradedElement solution;
    IterationTrace trace;
    std::string message;

    bool ok() const noexcept { return status == SolveStatus::converged; }
};

/// Runs the iteration from x_0 = 0 until |z_p|_d < residual_tol, p = max_iter,
/// theta_p > 2(N+1), or a failure. Throws outside_domain if |y|_{s0} >= delta
/// and the check is not disabled.
SolveOutcome solve(const TameProblem& problem, const GradedElement& y, const ScheduleParams& params,
                   const DerivedExponents& exps, const SolverConfig& config);

/// Bisection for the largest amplitude t (measured as |y|_{s0}) along the ray
/// t * direction for which solve succeeds and stays in U.
struct DeltaCalibration {
    double boundary = 0.0;  // last successful amplitude found
    double delta = 0.0;     // boundary * safety
    int solves = 0;
};

DeltaCalibration calibrate_delta(const TameProblem& problem, const GradedElement& direction,
                                 const ScheduleParams& params, const DerivedExponents& exps,
                                 const SolverConfig& config, double safety = 0.5,
                                 int bisection_steps = 40);

}  // namespace nashmoser
