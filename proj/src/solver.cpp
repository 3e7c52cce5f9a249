#include "nashmoser/solver.hpp"

#include <cmath>
#include <limits>

#include "nashmoser/error.hpp"

namespace nashmoser {

void ScheduleParams::validate() const {
    if (!(lambda >= 1.0 && lambda < tau && tau < 2.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "schedule requires 1 <= lambda < tau < 2 (lambda = " + std::to_string(lambda) +
                        ", tau = " + std::to_string(tau) + ")");
    }
}

double schedule(int p, const ScheduleParams& params) {
    if (p < 0) throw Error(ErrorCode::invalid_argument, "schedule index must be >= 0");
    return std::exp2(std::pow(params.tau, p));
}

double DerivedExponents::growth_exponent(double n) const {
    return (n / lambda) * (lambda - 1.0) / (tau - 1.0) + (d + lambda) / (lambda * (tau - 1.0)) +
           m / (tau - 1.0);
}

nlohmann::json to_json(const DerivedExponents& e) {
    return {{"lambda", e.lambda}, {"tau", e.tau},   {"d", e.d},         {"m", e.m},
            {"mu", e.mu},         {"s", e.s},       {"s0", e.s0},       {"delta", e.delta},
            {"degenerate", e.degenerate},           {"L_of_d", e.growth_exponent(e.d)},
            {"L_of_s0", e.growth_exponent(e.s0)}};
}

DerivedExponents derive_exponents(const ProblemConstants& constants, const ScheduleParams& params) {
    constants.validate();
    params.validate();
    DerivedExponents e;
    e.lambda = params.lambda;
    e.tau = params.tau;
    e.d = constants.d;
    e.m = constants.m;
    const double tau = e.tau;
    e.mu = (2.0 + tau) / (2.0 - tau) * (e.d + e.m);

    // L is affine, so L(lambda s + d) = s (lambda-1)/(tau-1) + (d+1+m)/(tau-1) and
    // the constraint on s is linear with slope (tau - lambda)/(tau - 1).
    const double slope = (tau - e.lambda) / (tau - 1.0);
    if (!(slope > 0.0) || !std::isfinite(slope)) {
        throw Error(ErrorCode::exponent_derivation, "exponent derivation failed: tau <= lambda");
    }
    const double rhs = e.mu * tau + e.d + e.m + (e.d + 1.0 + e.m) / (tau - 1.0);
    e.s = std::max(e.d, rhs / slope);
    e.s0 = e.lambda * e.s + e.d;

    const double decay = e.summability_exponent();
    if (!(decay > 0.0)) {
        e.degenerate = true;
        e.delta = 1.0;
        return e;
    }
    double sum = 0.0;
    for (int j = 0; j < 10000; ++j) {
        const double term = std::exp2(-decay * std::pow(tau, j));
        sum += term;
        if (term <= sum * 1e-17) break;
    }
    e.delta = std::min(1.0, 1.0 / sum);
    return e;
}

std::string_view to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::left_domain: return "left U";
        case SolveStatus::neumann_divergence: return "Neumann divergence";
        case SolveStatus::stagnation: return "stagnation";
        case SolveStatus::max_iter: return "max_iter";
        case SolveStatus::truncation_ceiling: return "truncation ceiling";
    }
    return "unknown";
}

IterationState step(const TameProblem& problem, const IterationState& state, const GradedElement& y,
                    const ScheduleParams& params, const NeumannOptions& neumann, StepRecord* record) {
    require_in_domain(problem, state.x);
    const double theta = schedule(state.p, params);
    const NeumannResult series = neumann_sum(problem, state.x, theta, state.z, neumann);
    GradedElement dx = smooth(problem.approx_inverse(state.x, series.sum), theta);
    GradedElement next_x = state.x + dx;
    if (!next_x.all_finite()) {
        throw Error(ErrorCode::left_domain, "outside U: non-finite iterate",
                    std::numeric_limits<double>::infinity());
    }
    require_in_domain(problem, next_x);
    GradedElement next_z = y - problem.apply(next_x);
    if (record != nullptr) {
        record->dx = std::move(dx);
        record->neumann_terms = series.terms_used;
        record->neumann_converged = series.converged;
    }
    return {state.p + 1, std::move(next_x), std::move(next_z), schedule(state.p + 1, params)};
}

namespace {

TraceRow observe(const IterationState& state, const DerivedExponents& exps,
                 const std::vector<double>& n_grid) {
    TraceRow row;
    row.p = state.p;
    row.theta = state.theta;
    row.x_d = seminorm(state.x, exps.d);
    row.x_s0 = seminorm(state.x, exps.s0);
    row.z_d = seminorm(state.z, exps.d);
    row.z_s0 = seminorm(state.z, exps.s0);
    for (double n : n_grid) row.x_n.push_back(seminorm(state.x, n));
    return row;
}

}  // namespace

SolveOutcome solve(const TameProblem& problem, const GradedElement& y, const ScheduleParams& params,
                   const DerivedExponents& exps, const SolverConfig& config) {
    if (y.order() != problem.order()) {
        throw Error(ErrorCode::dimension_mismatch, "target and problem truncation orders differ");
    }
    if (problem.mean_free() && y.at(0) != Coeff{}) {
        throw Error(ErrorCode::invalid_argument, "problem " + problem.id() + " needs a mean-zero target");
    }
    const double y_s0 = seminorm(y, exps.s0);
    if (!config.allow_outside_domain && !(y_s0 < exps.delta)) {
        throw Error(ErrorCode::outside_domain,
                    "outside V: |y|_s0 = " + std::to_string(y_s0) +
                        " >= delta = " + std::to_string(exps.delta),
                    y_s0);
    }

    SolveOutcome out{SolveStatus::converged, GradedElement(problem.order()), {}, {}};
    IterationTrace& trace = out.trace;
    trace.order = problem.order();
    trace.d = exps.d;
    trace.s0 = exps.s0;
    trace.n_grid = config.n_grid;
    trace.y_d = seminorm(y, exps.d);
    trace.y_s0 = y_s0;
    for (double n : config.n_grid) trace.y_n.push_back(seminorm(y, n));

    const double ceiling = 2.0 * (problem.order() + 1);
    IterationState state{0, GradedElement(problem.order()), y, schedule(0, params)};
    int flat_steps = 0;
    auto finish = [&](SolveStatus status, std::string message) {
        out.status = status;
        out.message = std::move(message);
        trace.status = status;
        trace.message = out.message;
        out.solution = state.x;
    };

    while (true) {
        TraceRow row = observe(state, exps, config.n_grid);
        if (row.z_d < config.residual_tol) {
            trace.rows.push_back(std::move(row));
            finish(SolveStatus::converged, "residual below tolerance");
            break;
        }
        if (state.p >= config.max_iter) {
            trace.rows.push_back(std::move(row));
            finish(SolveStatus::max_iter, "max_iter reached");
            break;
        }
        if (state.theta > ceiling) {
            trace.rows.push_back(std::move(row));
            finish(SolveStatus::truncation_ceiling,
                   "truncation ceiling: theta_p exceeds 2(N+1) before the residual tolerance");
            break;
        }
        StepRecord record{GradedElement(problem.order())};
        std::optional<IterationState> next;
        try {
            next = step(problem, state, y, params, config.neumann, &record);
        } catch (const Error& e) {
            trace.rows.push_back(std::move(row));
            if (e.code() == ErrorCode::left_domain) {
                finish(SolveStatus::left_domain, e.what());
                break;
            }
            if (e.code() == ErrorCode::neumann_divergence) {
                finish(SolveStatus::neumann_divergence, e.what());
                break;
            }
            throw;
        }
        row.dx_d = seminorm(record.dx, exps.d);
        for (double n : config.n_grid) row.dx_n.push_back(seminorm(record.dx, n));
        row.neumann_terms = record.neumann_terms;
        const double before = row.z_d;
        trace.rows.push_back(std::move(row));
        state = std::move(*next);

        if (seminorm(state.z, exps.d) >= before) {
            if (++flat_steps >= config.stagnation_steps) {
                trace.rows.push_back(observe(state, exps, config.n_grid));
                finish(SolveStatus::stagnation, "stagnation: residual not decreased over " +
                                                    std::to_string(flat_steps) + " steps");
                break;
            }
        } else {
            flat_steps = 0;
        }
    }
    return out;
}

DeltaCalibration calibrate_delta(const TameProblem& problem, const GradedElement& direction,
                                 const ScheduleParams& params, const DerivedExponents& exps,
                                 const SolverConfig& config, double safety, int bisection_steps) {
    const double dir_norm = seminorm(direction, exps.s0);
    if (dir_norm == 0.0) throw Error(ErrorCode::degenerate_input, "degenerate input: zero ray");
    const GradedElement unit = (1.0 / dir_norm) * direction;

    SolverConfig probe = config;
    probe.allow_outside_domain = true;
    DeltaCalibration cal;
    auto succeeds = [&](double t) {
        ++cal.solves;
        return solve(problem, t * unit, params, exps, probe).ok();
    };

    double lo = exps.delta;
    int tries = 0;
    while (!succeeds(lo)) {
        lo /= 10.0;
        if (++tries > 40) {
            throw Error(ErrorCode::degenerate_input, "delta calibration found no successful amplitude");
        }
    }
    double hi = lo * 10.0;
    tries = 0;
    while (succeeds(hi)) {
        lo = hi;
        hi *= 10.0;
        if (++tries > 40) break;  // unbounded along this ray
    }
    for (int i = 0; i < bisection_steps && hi / lo > 1.0 + 1e-9; ++i) {
        const double mid = std::sqrt(lo * hi);
        (succeeds(mid) ? lo : hi) = mid;
    }
    cal.boundary = lo;
    cal.delta = safety * lo;
    return cal;
}

}  // namespace nashmoser
