#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nashmoser/config.hpp"
#include "nashmoser/sampling.hpp"

namespace nashmoser {

/// Outcome of a CLI command. exit_code is 0 on success, 1 on a failed run or
/// failed check; configuration errors are thrown instead.
struct CommandResult {
    int exit_code = 0;
    std::string message;
    nlohmann::json summary;
};

/// Smoothing, rough and interpolation inequalities with constant 1 over
/// seeded samples. Writes reports/verify_space.json.
CommandResult cmd_verify_space(const ExperimentConfig& config);

/// All seven condition estimates plus phi(0) = 0. Writes reports/condition_<id>.json.
CommandResult cmd_verify_problem(const ExperimentConfig& config);

/// Builds y, calibrates delta, solves, runs the diagnostics. Writes trace.csv,
/// summary.json, reports/diagnostics.json and reports/diagnostics.csv.
CommandResult cmd_solve(const ExperimentConfig& config);

/// Cartesian sweep over (epsilon, amplitude, tau). Writes sweep.csv in grid order.
CommandResult cmd_sweep(const ExperimentConfig& config);

/// Problem, schedule, exponents and target direction shared by solve and sweep.
struct PreparedRun {
    ProblemPtr problem;
    ScheduleParams schedule;
    DerivedExponents exps;  // delta replaced by the calibrated value in bisect mode
    double analytic_delta = 1.0;
    std::optional<DeltaCalibration> calibration;
    SampleShape shape;
    GradedElement direction;  // |direction|_{s0} = 1
    SolverConfig solver;      // n grid covers every diagnostic index
};

PreparedRun prepare_run(const ResolvedConfig& config);

/// Target y = amplitude * direction with the amplitude read per target.amplitude_scale.
GradedElement build_target(const PreparedRun& run, const ResolvedConfig& config, double amplitude);

struct SolveRun {
    SolveOutcome outcome;
    GradedElement target;
    std::vector<FitReport> reports;
    std::vector<std::string> failing;  // names of failed checks
};

/// Solve at the given amplitude plus every configured diagnostic.
SolveRun run_solve(const PreparedRun& run, const ResolvedConfig& config, double amplitude);

/// "p,theta,..." with the frozen column order; first line "# config_hash=<hash>".
std::string trace_csv(const IterationTrace& trace, const std::string& config_hash);

}  // namespace nashmoser
