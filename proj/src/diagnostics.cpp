#include "nashmoser/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "nashmoser/error.hpp"
#include "nashmoser/fit.hpp"

namespace nashmoser {
namespace {

constexpr double index_match = 1e-12;

void require_rows(std::size_t have, std::size_t need, std::string_view what) {
    if (have < need) {
        throw Error(ErrorCode::insufficient_rows,
                    "insufficient rows for " + std::string(what) + ": " + std::to_string(have) +
                        " usable, " + std::to_string(need) + " required",
                    static_cast<double>(have));
    }
}

std::optional<std::size_t> grid_slot(const std::vector<double>& grid, double n) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::abs(grid[i] - n) <= index_match * std::max(1.0, std::abs(n))) return i;
    }
    return std::nullopt;
}

bool same_index(double a, double b) { return std::abs(a - b) <= index_match * std::max(1.0, std::abs(a)); }

double x_norm(const IterationTrace& trace, const TraceRow& row, double n) {
    if (auto slot = grid_slot(trace.n_grid, n)) return row.x_n.at(*slot);
    if (same_index(n, trace.d)) return row.x_d;
    if (same_index(n, trace.s0)) return row.x_s0;
    throw Error(ErrorCode::invalid_argument, "seminorm index " + std::to_string(n) + " not recorded in trace");
}

double y_norm(const IterationTrace& trace, double n) {
    if (auto slot = grid_slot(trace.n_grid, n)) return trace.y_n.at(*slot);
    if (same_index(n, trace.d)) return trace.y_d;
    if (same_index(n, trace.s0)) return trace.y_s0;
    throw Error(ErrorCode::invalid_argument, "seminorm index " + std::to_string(n) + " not recorded in trace");
}

std::optional<double> dx_norm(const IterationTrace& trace, const TraceRow& row, double n) {
    if (!row.dx_d) return std::nullopt;
    if (auto slot = grid_slot(trace.n_grid, n)) return row.dx_n.at(*slot);
    if (same_index(n, trace.d)) return row.dx_d;
    throw Error(ErrorCode::invalid_argument, "increment index " + std::to_string(n) + " not recorded in trace");
}

}  // namespace

std::string_view to_string(Quantity q) {
    switch (q) {
        case Quantity::growth_L: return "growth_L";
        case Quantity::residual_mu: return "residual_mu";
        case Quantity::residual_signature: return "residual_signature";
        case Quantity::residual_a: return "residual_a";
        case Quantity::delta_domain: return "delta_domain";
        case Quantity::all_index_b: return "all_index_b";
        case Quantity::cauchy: return "cauchy";
        case Quantity::theorem_bound: return "theorem_bound";
    }
    return "unknown";
}

nlohmann::json to_json(const FitReport& r) {
    return {{"quantity", to_string(r.quantity)}, {"predicted", r.predicted}, {"measured", r.measured},
            {"pass", r.pass},                    {"rows_used", r.rows_used}, {"vacuous", r.vacuous},
            {"details", r.details}};
}

std::vector<std::size_t> usable_rows(const IterationTrace& trace, bool residual_above_floor, double floor) {
    std::vector<std::size_t> out;
    const double limit = trace.order + 1.0;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const TraceRow& row = trace.rows[i];
        if (row.theta > limit) continue;
        if (residual_above_floor && !(row.z_d >= floor)) continue;
        out.push_back(i);
    }
    return out;
}

FitReport check_lemma1(const IterationTrace& trace, double n, const DerivedExponents& exps,
                       const DiagnosticTolerances& tol) {
    const double yn = y_norm(trace, n);
    if (yn == 0.0) throw Error(ErrorCode::degenerate_input, "degenerate input: |y|_n = 0");
    const double L = exps.growth_exponent(n);

    std::vector<double> log_theta, log_ratio;
    double k_hat = 0.0;
    for (std::size_t i : usable_rows(trace, false)) {
        const TraceRow& row = trace.rows[i];
        const double xn = x_norm(trace, row, n);
        if (xn == 0.0) continue;  // x_0 = 0 carries no information about the ratio
        const double ratio = xn / (std::pow(row.theta, L) * yn);
        log_theta.push_back(std::log(row.theta));
        log_ratio.push_back(std::log(ratio));
        k_hat = std::max(k_hat, ratio);
    }
    require_rows(log_theta.size(), 3, "growth-bound fit");
    const LineFit fit = fit_line(log_theta, log_ratio);

    FitReport r;
    r.quantity = Quantity::growth_L;
    r.predicted = tol.boundedness_slope;
    r.measured = fit.slope;
    r.pass = fit.slope <= tol.boundedness_slope;
    r.rows_used = fit.points;
    r.details = {{"n", n}, {"L_of_n", L}, {"K_hat", k_hat}};
    return r;
}

FitReport check_lemma2(const IterationTrace& trace, const DerivedExponents& exps,
                       const DiagnosticTolerances& tol) {
    FitReport r;
    r.quantity = Quantity::residual_mu;
    r.predicted = exps.mu;
    const auto rows = usable_rows(trace, true, tol.residual_floor);
    if (exps.mu <= 0.0) {
        r.pass = true;
        r.vacuous = true;
        r.rows_used = static_cast<int>(rows.size());
        r.details = {{"note", "mu = 0: any decay satisfies the bound"}};
        return r;
    }
    require_rows(rows.size(), 3, "residual decay fit");
    if (trace.y_s0 == 0.0) throw Error(ErrorCode::degenerate_input, "degenerate input: |y|_s0 = 0");

    std::vector<double> log_theta, log_z;
    double m_hat = 0.0;
    for (std::size_t i : rows) {
        const TraceRow& row = trace.rows[i];
        log_theta.push_back(std::log(row.theta));
        log_z.push_back(std::log(row.z_d));
        m_hat = std::max(m_hat, row.z_d * std::pow(row.theta, exps.mu) / trace.y_s0);
    }
    const LineFit fit = fit_line(log_theta, log_z);
    r.measured = -fit.slope;
    r.pass = r.measured >= (1.0 - tol.decay_slack) * exps.mu;
    r.rows_used = fit.points;
    r.details = {{"threshold", (1.0 - tol.decay_slack) * exps.mu},
                 {"M_hat", m_hat},
                 {"margin", r.measured - (1.0 - tol.decay_slack) * exps.mu}};
    return r;
}

FitReport check_double_exponential(const IterationTrace& trace, const DerivedExponents& exps,
                                   const DiagnosticTolerances& tol) {
    std::vector<double> p, loglog;
    for (std::size_t i : usable_rows(trace, true, tol.residual_floor)) {
        const TraceRow& row = trace.rows[i];
        if (!(row.z_d < 1.0)) continue;
        p.push_back(row.p);
        loglog.push_back(std::log(std::log(1.0 / row.z_d)));
    }
    require_rows(p.size(), 3, "double-exponential fit");
    const LineFit fit = fit_line(p, loglog);
    const double expected = std::log(exps.tau);

    FitReport r;
    r.quantity = Quantity::residual_signature;
    r.predicted = expected;
    r.measured = fit.slope;
    r.pass = fit.slope >= 0.5 * expected && fit.slope <= 1.5 * expected;
    r.rows_used = fit.points;
    r.details = {{"low", 0.5 * expected}, {"high", 1.5 * expected}};
    return r;
}

std::vector<FitReport> check_lemma4(const IterationTrace& trace, const DerivedExponents& exps,
                                    std::vector<double> a_grid, const DiagnosticTolerances& tol) {
    if (a_grid.empty()) {
        const double dm = exps.d + exps.m;
        a_grid = {exps.mu, exps.mu + dm, exps.mu + 2.0 * dm};
    }
    const auto rows = usable_rows(trace, true, tol.residual_floor);
    require_rows(rows.size(), 2, "rate-a partial suprema");
    if (trace.y_s0 == 0.0) throw Error(ErrorCode::degenerate_input, "degenerate input: |y|_s0 = 0");

    std::vector<FitReport> out;
    for (double a : a_grid) {
        double sup = 0.0;
        double worst_growth = 1.0;
        for (std::size_t i : rows) {
            const TraceRow& row = trace.rows[i];
            const double value = row.z_d * std::pow(row.theta, a) / trace.y_s0;
            if (sup > 0.0) worst_growth = std::max(worst_growth, std::max(sup, value) / sup);
            sup = std::max(sup, value);
        }
        FitReport r;
        r.quantity = Quantity::residual_a;
        r.predicted = tol.sup_growth;
        r.measured = worst_growth;
        r.pass = std::isfinite(sup) && worst_growth <= tol.sup_growth;
        r.rows_used = static_cast<int>(rows.size());
        r.details = {{"a", a}, {"C_hat", sup}, {"y_index", trace.s0}};
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<FitReport> check_lemma5_and_cauchy(const IterationTrace& trace,
                                               const std::vector<double>& n_grid, double b,
                                               const DiagnosticTolerances& tol) {
    if (n_grid.empty()) throw Error(ErrorCode::invalid_argument, "increment decay check needs a non-empty n grid");
    const auto rows = usable_rows(trace, false);

    FitReport decay;
    decay.quantity = Quantity::all_index_b;
    decay.predicted = b;
    decay.measured = std::numeric_limits<double>::infinity();
    decay.pass = true;
    FitReport cauchy;
    cauchy.quantity = Quantity::cauchy;
    cauchy.pass = true;

    nlohmann::json per_index = nlohmann::json::array();
    nlohmann::json tails = nlohmann::json::array();
    int fitted = 0;
    int most_rows = 0;
    double worst_tail_ratio = 0.0;
    for (double n : n_grid) {
        std::vector<double> log_theta, log_dx, dx_all;
        for (std::size_t i : rows) {
            const auto v = dx_norm(trace, trace.rows[i], n);
            if (!v) continue;
            dx_all.push_back(*v);
            if (*v < tol.residual_floor) continue;
            log_theta.push_back(std::log(trace.rows[i].theta));
            log_dx.push_back(std::log(*v));
        }
        // tail sums over every increment, floor included: the Cauchy witness
        std::vector<double> tail(dx_all.size() + 1, 0.0);
        for (std::size_t j = dx_all.size(); j-- > 0;) tail[j] = tail[j + 1] + dx_all[j];
        for (std::size_t j = 0; j + 1 < tail.size(); ++j) {
            if (tail[j] > 0.0) worst_tail_ratio = std::max(worst_tail_ratio, tail[j + 1] / tail[j]);
            if (tail[j + 1] > tail[j]) cauchy.pass = false;
        }
        tails.push_back({{"n", n}, {"tail_sums", tail}});
        most_rows = std::max(most_rows, static_cast<int>(dx_all.size()));

        if (log_theta.size() < 3) {
            per_index.push_back({{"n", n}, {"rows", log_theta.size()}, {"fitted", false}});
            continue;
        }
        const LineFit fit = fit_line(log_theta, log_dx);
        ++fitted;
        decay.measured = std::min(decay.measured, -fit.slope);
        decay.rows_used = std::max(decay.rows_used, fit.points);
        if (-fit.slope < (1.0 - tol.decay_slack) * b) decay.pass = false;
        per_index.push_back({{"n", n}, {"rows", fit.points}, {"fitted", true}, {"decay", -fit.slope}});
    }
    if (fitted == 0) {
        decay.vacuous = true;
        decay.measured = 0.0;
    }
    decay.details = {{"threshold", (1.0 - tol.decay_slack) * b}, {"per_index", per_index}};

    cauchy.predicted = 1.0;
    cauchy.measured = worst_tail_ratio;
    cauchy.rows_used = most_rows;
    cauchy.vacuous = most_rows < 2;
    cauchy.details = {{"per_index", tails}};
    return {decay, cauchy};
}

FitReport check_theorem_bound(std::span<const SolvedPair> solutions, double s0, double d,
                              const DiagnosticTolerances& tol) {
    std::vector<double> log_y, log_ratio;
    double max_ratio = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const SolvedPair& pair : solutions) {
        const double ys0 = seminorm(pair.y, s0);
        if (ys0 == 0.0) continue;
        const double ratio = seminorm(pair.psi, d) / ys0;
        max_ratio = std::max(max_ratio, ratio);
        lo = std::min(lo, ys0);
        hi = std::max(hi, ys0);
        log_y.push_back(std::log(ys0));
        log_ratio.push_back(std::log(std::max(ratio, std::numeric_limits<double>::min())));
    }
    if (log_y.empty() && !solutions.empty()) {
        throw Error(ErrorCode::degenerate_input, "degenerate input: every target is zero");
    }
    if (log_y.size() < 5) {
        throw Error(ErrorCode::insufficient_rows,
                    "insufficient instances: " + std::to_string(log_y.size()) + " nonzero, 5 required",
                    static_cast<double>(log_y.size()));
    }
    if (hi / lo < 100.0 * (1.0 - 1e-9)) {
        throw Error(ErrorCode::insufficient_rows,
                    "insufficient instances: |y|_s0 spans less than 2 decades", hi / lo);
    }
    const LineFit fit = fit_line(log_y, log_ratio);

    FitReport r;
    r.quantity = Quantity::theorem_bound;
    r.predicted = 0.0;
    r.measured = max_ratio;
    r.pass = std::isfinite(max_ratio) && std::abs(fit.slope) <= tol.trend_tol;
    r.rows_used = fit.points;
    r.details = {{"C_hat", max_ratio}, {"trend_slope", fit.slope}, {"trend_tol", tol.trend_tol},
                 {"y_s0_min", lo},     {"y_s0_max", hi}};
    return r;
}

FitReport check_lemma3_domain(std::span<const IterationTrace> traces, double delta) {
    FitReport r;
    r.quantity = Quantity::delta_domain;
    r.predicted = 1.0;
    r.pass = true;
    double max_x = 0.0;
    double max_sum_ratio = 0.0;
    int checked = 0;
    int rows = 0;
    for (const IterationTrace& trace : traces) {
        if (!(trace.y_s0 < delta)) continue;
        ++checked;
        double sum = 0.0;
        for (const TraceRow& row : trace.rows) {
            ++rows;
            max_x = std::max(max_x, row.x_d);
            if (!(row.x_d < 1.0)) r.pass = false;
            if (row.dx_d) sum += *row.dx_d;
        }
        if (trace.y_s0 > 0.0) max_sum_ratio = std::max(max_sum_ratio, sum / trace.y_s0);
    }
    r.measured = max_x;
    r.rows_used = rows;
    r.vacuous = checked == 0;
    r.details = {{"delta", delta}, {"traces_checked", checked}, {"max_increment_sum_ratio", max_sum_ratio}};
    return r;
}

}  // namespace nashmoser
