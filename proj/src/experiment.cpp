#include "nashmoser/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <thread>

#include "nashmoser/error.hpp"

namespace nashmoser {
namespace {

namespace fs = std::filesystem;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// Timestamps live only here so the artifacts stay byte-identical across runs.
void log_run(const fs::path& dir, std::string_view command, const std::string& hash, const CommandResult& r) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(dir / "run.log", std::ios::app);
    out << stamp << ' ' << command << " config_hash=" << hash << " exit=" << r.exit_code << ' ' << r.message
        << '\n';
}

std::vector<double> merged_grid(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::vector<double> growth_indices(const ResolvedConfig& config, const DerivedExponents& e) {
    if (!config.diagnostics.n_grid.empty()) return config.diagnostics.n_grid;
    return {e.d, 2.0 * e.d + 1.0, e.s0};
}

std::vector<double> increment_indices(const ResolvedConfig& config, const DerivedExponents& e) {
    if (!config.diagnostics.increment_n.empty()) return config.diagnostics.increment_n;
    return {e.d};
}

FitReport failed_report(Quantity q, const Error& e) {
    FitReport r;
    r.quantity = q;
    r.pass = false;
    r.details = {{"error", e.what()}, {"code", to_string(e.code())}};
    return r;
}

std::string report_name(const FitReport& r) {
    std::string name(to_string(r.quantity));
    if (r.details.contains("n") && r.quantity == Quantity::growth_L) {
        name += "[n=" + short_num(r.details["n"].get<double>()) + "]";
    }
    if (r.details.contains("a")) name += "[a=" + short_num(r.details["a"].get<double>()) + "]";
    return name;
}

std::string diagnostics_csv(const std::vector<FitReport>& reports, const std::string& hash) {
    std::string out = "# config_hash=" + hash + "\nquantity,predicted,measured,pass,rows_used,vacuous\n";
    for (const FitReport& r : reports) {
        out += report_name(r) + "," + num(r.predicted) + "," + num(r.measured) + "," +
               (r.pass ? "true" : "false") + "," + std::to_string(r.rows_used) + "," +
               (r.vacuous ? "true" : "false") + "\n";
    }
    return out;
}

nlohmann::json reports_json(const std::vector<FitReport>& reports) {
    nlohmann::json out = nlohmann::json::array();
    for (const FitReport& r : reports) {
        auto j = to_json(r);
        j["name"] = report_name(r);
        out.push_back(std::move(j));
    }
    return out;
}

void run_theorem_instances(const PreparedRun& run, const ResolvedConfig& config, SolveRun& out) {
    const int count = config.diagnostics.theorem_instances;
    const double delta = run.exps.delta;
    std::vector<SolvedPair> pairs;
    std::vector<IterationTrace> traces;
    bool all_converged = true;
    double max_residual = 0.0;
    std::string first_failure;
    for (int i = 0; i < count; ++i) {
        // log-spaced over [delta/100, delta), the top kept strictly inside V
        const double amplitude = delta * (1.0 - 1e-9) * std::pow(100.0, -static_cast<double>(i) / (count - 1));
        Rng rng(config.target.seed + 1 + static_cast<std::uint64_t>(i));
        const GradedElement y =
            scale_to(random_element(run.problem->order(), rng, run.shape), run.exps.s0, amplitude);
        SolveOutcome solved = solve(*run.problem, y, run.schedule, run.exps, run.solver);
        if (!solved.ok()) {
            all_converged = false;
            if (first_failure.empty()) first_failure = std::string(to_string(solved.status));
        }
        max_residual = std::max(max_residual, seminorm(run.problem->apply(solved.solution) - y, run.exps.d));
        pairs.push_back({y, solved.solution});
        traces.push_back(std::move(solved.trace));
    }

    FitReport theorem;
    try {
        theorem = check_theorem_bound(pairs, run.exps.s0, run.exps.d, config.diagnostics.tolerances);
    } catch (const Error& e) {
        theorem = failed_report(Quantity::theorem_bound, e);
    }
    theorem.details["instances"] = count;
    theorem.details["all_converged"] = all_converged;
    theorem.details["max_residual"] = max_residual;
    if (!all_converged) {
        theorem.pass = false;
        theorem.details["first_failure"] = first_failure;
    }
    out.reports.push_back(std::move(theorem));

    FitReport domain = check_lemma3_domain(traces, delta * (1.0 + 1e-12));
    if (!all_converged) domain.details["note"] = "some instance solves did not converge";
    out.reports.push_back(std::move(domain));
}

void run_diagnostics(const PreparedRun& run, const ResolvedConfig& config, SolveRun& out) {
    const IterationTrace& trace = out.outcome.trace;
    const DerivedExponents& e = run.exps;
    const DiagnosticTolerances& tol = config.diagnostics.tolerances;
    auto guarded = [&](Quantity q, auto&& fn) {
        try {
            fn();
        } catch (const Error& err) {
            out.reports.push_back(failed_report(q, err));
        }
    };

    for (double n : growth_indices(config, e)) {
        try {
            out.reports.push_back(check_lemma1(trace, n, e, tol));
        } catch (const Error& err) {
            out.reports.push_back(failed_report(Quantity::growth_L, err));
            out.reports.back().details["n"] = n;
        }
    }
    guarded(Quantity::residual_mu, [&] { out.reports.push_back(check_lemma2(trace, e, tol)); });
    if (!e.degenerate) {
        guarded(Quantity::residual_signature,
                [&] { out.reports.push_back(check_double_exponential(trace, e, tol)); });
    }
    guarded(Quantity::residual_a, [&] {
        for (FitReport& r : check_lemma4(trace, e, config.diagnostics.a_grid, tol)) out.reports.push_back(std::move(r));
    });
    const double b = config.diagnostics.b.value_or(e.summability_exponent());
    guarded(Quantity::all_index_b, [&] {
        for (FitReport& r : check_lemma5_and_cauchy(trace, increment_indices(config, e), b, tol)) {
            out.reports.push_back(std::move(r));
        }
    });
    if (config.diagnostics.theorem_instances > 0) {
        guarded(Quantity::theorem_bound, [&] { run_theorem_instances(run, config, out); });
    }
    for (const FitReport& r : out.reports) {
        if (!r.pass) out.failing.push_back(report_name(r));
    }
}

nlohmann::json prepared_json(const PreparedRun& run, const ResolvedConfig& config) {
    nlohmann::json delta = {{"analytic", run.analytic_delta},
                            {"used", run.exps.delta},
                            {"mode", config.calibration == CalibrationMode::bisect ? "bisect" : "analytic"}};
    if (run.calibration) {
        delta["boundary"] = run.calibration->boundary;
        delta["safety"] = config.calibration_safety;
        delta["solves"] = run.calibration->solves;
    }
    return {{"problem", run.problem->describe()},
            {"schedule", {{"lambda", run.schedule.lambda}, {"tau", run.schedule.tau}}},
            {"exponents", to_json(run.exps)},
            {"delta", delta},
            {"target_shape",
             {{"decay", run.shape.decay}, {"band_limit", run.shape.band_limit}, {"mean_free", run.shape.mean_free}}}};
}

double final_residual(const SolveOutcome& o) {
    return o.trace.rows.empty() ? std::numeric_limits<double>::quiet_NaN() : o.trace.rows.back().z_d;
}

int iterations(const SolveOutcome& o) {
    return o.trace.rows.empty() ? 0 : static_cast<int>(o.trace.rows.size()) - 1;
}

}  // namespace

PreparedRun prepare_run(const ResolvedConfig& config) {
    PreparedRun run{make_problem(config.problem), {}, {}, 1.0, std::nullopt, {}, GradedElement(config.problem.order), {}};
    const ProblemConstants& c = run.problem->constants();
    run.schedule.lambda = config.schedule_lambda.value_or(c.lambda);
    run.schedule.tau = config.schedule_tau.value_or((run.schedule.lambda + 2.0) / 2.0);
    run.exps = derive_exponents(c, run.schedule);
    run.analytic_delta = run.exps.delta;

    run.shape.decay = config.target.decay.value_or(run.exps.s0 + 2.0 * (run.exps.d + run.exps.m) + 1.0);
    run.shape.mean_free = run.problem->mean_free();
    run.shape.band_limit = config.target.band_limit.value_or(0);
    Rng rng(config.target.seed);
    run.direction = scale_to(random_element(run.problem->order(), rng, run.shape), run.exps.s0, 1.0);

    run.solver = config.solver;
    if (config.calibration == CalibrationMode::bisect) {
        run.calibration = calibrate_delta(*run.problem, run.direction, run.schedule, run.exps, run.solver,
                                          config.calibration_safety, config.calibration_steps);
        run.exps.delta = run.calibration->delta;
    }
    run.solver.n_grid = merged_grid(growth_indices(config, run.exps), increment_indices(config, run.exps));
    return run;
}

GradedElement build_target(const PreparedRun& run, const ResolvedConfig& config, double amplitude) {
    const double scale = config.target.scale == AmplitudeScale::delta ? run.exps.delta : 1.0;
    return (amplitude * scale) * run.direction;
}

SolveRun run_solve(const PreparedRun& run, const ResolvedConfig& config, double amplitude) {
    GradedElement y = build_target(run, config, amplitude);
    SolveRun out{solve(*run.problem, y, run.schedule, run.exps, run.solver), std::move(y), {}, {}};
    run_diagnostics(run, config, out);
    return out;
}

std::string trace_csv(const IterationTrace& trace, const std::string& config_hash) {
    std::string out = "# config_hash=" + config_hash + "\n";
    out += "p,theta,x_d,x_s0,z_d,z_s0,dx_d,neumann_terms";
    for (double n : trace.n_grid) out += ",x_n[" + short_num(n) + "]";
    for (double n : trace.n_grid) out += ",dx_n[" + short_num(n) + "]";
    out += "\n";
    for (const TraceRow& row : trace.rows) {
        out += std::to_string(row.p) + "," + num(row.theta) + "," + num(row.x_d) + "," + num(row.x_s0) + "," +
               num(row.z_d) + "," + num(row.z_s0) + "," + (row.dx_d ? num(*row.dx_d) : "") + "," +
               std::to_string(row.neumann_terms);
        for (double v : row.x_n) out += "," + num(v);
        for (std::size_t i = 0; i < trace.n_grid.size(); ++i) {
            out += ",";
            if (i < row.dx_n.size()) out += num(row.dx_n[i]);
        }
        out += "\n";
    }
    return out;
}

CommandResult cmd_verify_space(const ExperimentConfig& config) {
    const ResolvedConfig rc = resolve(config);
    const VerifySpaceSpec& spec = rc.verify_space;
    const std::string hash = config.hash();
    Rng rng(spec.seed);
    const double theta_max = 2.0 * (spec.order + 1);
    const double bound = 1.0 + spec.rel_tol;

    CommandResult result;
    nlohmann::json pairs = nlohmann::json::array();
    nlohmann::json first_failure;
    for (double k : spec.grid) {
        for (double n : spec.grid) {
            if (k > n) continue;
            double worst_smooth = 0.0, worst_rough = 0.0, worst_interp = 0.0;
            for (int s = 0; s < spec.samples; ++s) {
                SampleShape shape;
                shape.decay = rng.uniform(0.0, 10.0);
                shape.real_valued = s % 2 == 0;
                const GradedElement x = random_element(spec.order, rng, shape);
                const double theta = std::exp(rng.uniform(0.0, std::log(theta_max)));
                const double l = rng.uniform(k, n);

                // ratios formed in log space: weights reach (2N+3)^(8 power)
                const double lxk = std::log(seminorm(x, k, spec.grading));
                const double lxn = std::log(seminorm(x, n, spec.grading));
                const double lt = std::log(theta);
                const double smooth_n = seminorm(smooth(x, theta), n, spec.grading);
                const double rough_k = seminorm(rough(x, theta), k, spec.grading);
                const double r_smooth = smooth_n == 0.0 ? 0.0 : std::exp(std::log(smooth_n) - (n - k) * lt - lxk);
                const double r_rough = rough_k == 0.0 ? 0.0 : std::exp(std::log(rough_k) + (n - k) * lt - lxn);
                const double r_interp = check_interpolation(x, k, l, n, spec.grading);
                worst_smooth = std::max(worst_smooth, r_smooth);
                worst_rough = std::max(worst_rough, r_rough);
                worst_interp = std::max(worst_interp, r_interp);

                if (first_failure.is_null() && (r_smooth > bound || r_rough > bound || r_interp > bound)) {
                    const char* which = r_smooth > bound ? "smoothing" : r_rough > bound ? "rough" : "interpolation";
                    first_failure = {{"inequality", which}, {"k", k},       {"n", n},
                                     {"l", l},              {"theta", theta}, {"sample", s},
                                     {"ratio", std::max({r_smooth, r_rough, r_interp})},
                                     {"x", to_json(x)}};
                }
            }
            pairs.push_back({{"k", k},
                             {"n", n},
                             {"max_smoothing_ratio", worst_smooth},
                             {"max_rough_ratio", worst_rough},
                             {"max_interpolation_ratio", worst_interp}});
        }
    }
    const bool pass = first_failure.is_null();
    result.exit_code = pass ? 0 : 1;
    result.message = pass ? "space invariants hold" : "space invariant violated: " + first_failure["inequality"].get<std::string>();
    result.summary = {{"config_hash", hash},
                      {"command", "verify-space"},
                      {"order", spec.order},
                      {"samples_per_pair", spec.samples},
                      {"weight_power", spec.grading.power},
                      {"rel_tol", spec.rel_tol},
                      {"pass", pass},
                      {"pairs", pairs}};
    if (!pass) result.summary["first_failure"] = first_failure;
    write_file(rc.output_dir / "reports" / "verify_space.json", dump_json(result.summary));
    log_run(rc.output_dir, "verify-space", hash, result);
    return result;
}

CommandResult cmd_verify_problem(const ExperimentConfig& config) {
    const ResolvedConfig rc = resolve(config);
    const std::string hash = config.hash();
    CommandResult result;
    result.summary = {{"config_hash", hash}, {"command", "verify-problem"}};
    try {
        const ProblemPtr problem = make_problem(rc.problem);
        result.summary["problem"] = problem->describe();
        nlohmann::json conditions = nlohmann::json::array();
        int violated = 0;
        for (int id = 1; id <= 7; ++id) {
            ConditionReport report;
            try {
                report = estimate_condition(*problem, id, rc.sampler);
            } catch (const Error& e) {
                if (e.code() != ErrorCode::condition_violated) throw;
                if (violated == 0) violated = id;
                conditions.push_back({{"condition_id", id}, {"error", e.what()}});
                continue;
            }
            nlohmann::json j = to_json(report);
            j["config_hash"] = hash;
            write_file(rc.output_dir / "reports" / ("condition_" + std::to_string(id) + ".json"), dump_json(j));
            if (!std::isfinite(report.estimated_constant) && violated == 0) violated = id;
            conditions.push_back({{"condition_id", id}, {"estimated_constant", report.estimated_constant}});
        }
        const double phi0 = seminorm(problem->apply(GradedElement(problem->order())), problem->constants().d);
        const bool phi0_ok = phi0 <= 1e-12;
        result.summary["conditions"] = conditions;
        result.summary["phi_at_zero"] = phi0;
        result.exit_code = violated == 0 && phi0_ok ? 0 : 1;
        if (violated != 0) {
            result.message = "condition (" + std::to_string(violated) + ") violated";
            result.summary["violated_condition"] = violated;
        } else if (!phi0_ok) {
            result.message = "phi(0) != 0";
        } else {
            result.message = "all conditions finite";
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config) throw;
        result.exit_code = 1;
        result.message = e.what();
        result.summary["error"] = e.what();
        result.summary["code"] = to_string(e.code());
    }
    result.summary["pass"] = result.exit_code == 0;
    write_file(rc.output_dir / "reports" / "verify_problem.json", dump_json(result.summary));
    log_run(rc.output_dir, "verify-problem", hash, result);
    return result;
}

CommandResult cmd_solve(const ExperimentConfig& config) {
    const ResolvedConfig rc = resolve(config);
    const std::string hash = config.hash();
    CommandResult result;
    result.summary = {{"config_hash", hash}, {"command", "solve"}};
    try {
        const PreparedRun run = prepare_run(rc);
        result.summary.update(prepared_json(run, rc));
        const SolveRun solved = run_solve(run, rc, rc.target.amplitude);
        const SolveOutcome& o = solved.outcome;
        result.summary["target"] = {{"seed", rc.target.seed},
                                    {"y_d", o.trace.y_d},
                                    {"y_s0", o.trace.y_s0}};
        result.summary["status"] = to_string(o.status);
        result.summary["message"] = o.message;
        result.summary["iterations"] = iterations(o);
        result.summary["final_residual"] = final_residual(o);
        result.summary["solution_d"] = seminorm(o.solution, run.exps.d);
        result.summary["diagnostics"] = reports_json(solved.reports);
        result.summary["failing"] = solved.failing;
        write_file(rc.output_dir / "trace.csv", trace_csv(o.trace, hash));
        write_file(rc.output_dir / "reports" / "diagnostics.json",
                   dump_json({{"config_hash", hash}, {"reports", reports_json(solved.reports)}}));
        write_file(rc.output_dir / "reports" / "diagnostics.csv", diagnostics_csv(solved.reports, hash));
        if (!o.ok()) {
            result.exit_code = 1;
            result.message = std::string(to_string(o.status)) + ": " + o.message;
        } else if (!solved.failing.empty()) {
            result.exit_code = 1;
            result.message = "diagnostic failed: " + solved.failing.front();
        } else {
            result.message = "converged in " + std::to_string(iterations(o)) + " iterations; diagnostics pass";
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config) throw;
        result.exit_code = 1;
        result.message = e.what();
        result.summary["status"] = to_string(e.code());
        result.summary["message"] = e.what();
    }
    result.summary["pass"] = result.exit_code == 0;
    write_file(rc.output_dir / "summary.json", dump_json(result.summary));
    log_run(rc.output_dir, "solve", hash, result);
    return result;
}

CommandResult cmd_sweep(const ExperimentConfig& config) {
    const ResolvedConfig rc = resolve(config);
    const std::string hash = config.hash();
    auto or_single = [](const std::vector<double>& grid, std::optional<double> fallback) {
        if (!grid.empty()) return std::vector<std::optional<double>>(grid.begin(), grid.end());
        return std::vector<std::optional<double>>{fallback};
    };
    const auto eps_grid = or_single(rc.sweep.epsilon, rc.problem.epsilon);
    const auto amp_grid = or_single(rc.sweep.amplitude, rc.target.amplitude);
    const auto tau_grid = or_single(rc.sweep.tau, rc.schedule_tau);

    struct Point {
        double epsilon;
        double amplitude;
        std::optional<double> tau;
    };
    std::vector<Point> points;
    for (const auto& eps : eps_grid)
        for (const auto& amp : amp_grid)
            for (const auto& tau : tau_grid) points.push_back({*eps, *amp, tau});

    const bool delta_mode = rc.sweep.mode == SweepMode::delta;
    std::vector<std::string> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            const Point& pt = points[i];
            std::string row = std::to_string(i) + "," + num(pt.epsilon) + "," + num(pt.amplitude) + "," +
                              (pt.tau ? num(*pt.tau) : "auto") + ",";
            try {
                ExperimentConfig local = config;
                local.set("problem.epsilon", num(pt.epsilon));
                local.set("target.amplitude", num(pt.amplitude));
                if (pt.tau) local.set("schedule.tau", num(*pt.tau));
                if (delta_mode) local.set("calibration.mode", "bisect");
                const ResolvedConfig lrc = resolve(local);
                const PreparedRun run = prepare_run(lrc);
                if (delta_mode) {
                    row += "ok," + num(run.analytic_delta) + "," + num(run.calibration->delta) + "," +
                           num(run.calibration->boundary) + "," + std::to_string(run.calibration->solves);
                } else {
                    const SolveRun solved = run_solve(run, lrc, pt.amplitude);
                    double mu_hat = std::numeric_limits<double>::quiet_NaN();
                    double c_hat = seminorm(solved.outcome.solution, run.exps.d) / solved.outcome.trace.y_s0;
                    for (const FitReport& r : solved.reports) {
                        if (r.quantity == Quantity::residual_mu && !r.vacuous && r.details.contains("M_hat")) {
                            mu_hat = r.measured;
                        }
                        if (r.quantity == Quantity::theorem_bound && r.details.contains("C_hat")) {
                            c_hat = r.details["C_hat"].get<double>();
                        }
                    }
                    row += std::string(to_string(solved.outcome.status)) + "," +
                           std::to_string(iterations(solved.outcome)) + "," + num(final_residual(solved.outcome)) +
                           "," + num(mu_hat) + "," + num(c_hat) + "," + num(run.exps.delta) + "," +
                           (solved.outcome.ok() && solved.failing.empty() ? "true" : "false");
                }
            } catch (const Error& e) {
                row += std::string(to_string(e.code())) + (delta_mode ? ",,,," : ",,,,,,false");
            }
            rows[i] = std::move(row);
        }
    };
    {
        const int workers = std::min<int>(rc.sweep.workers, static_cast<int>(points.size()));
        std::vector<std::jthread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(work);
        work();
    }

    std::string csv = "# config_hash=" + hash + "\n";
    csv += delta_mode ? "index,epsilon,amplitude,tau,status,delta_analytic,delta_hat,boundary,solves\n"
                      : "index,epsilon,amplitude,tau,status,iterations,final_residual,mu_hat,C_hat,delta,pass\n";
    for (const std::string& row : rows) csv += row + "\n";
    write_file(rc.output_dir / "sweep.csv", csv);

    CommandResult result;
    result.message = "sweep completed: " + std::to_string(points.size()) + " runs";
    result.summary = {{"config_hash", hash}, {"command", "sweep"}, {"runs", points.size()},
                      {"mode", delta_mode ? "delta" : "solve"}};
    log_run(rc.output_dir, "sweep", hash, result);
    return result;
}

}  // namespace nashmoser
