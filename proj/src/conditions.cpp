#include "nashmoser/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <map>

#include "nashmoser/error.hpp"
#include "nashmoser/fit.hpp"
#include "nashmoser/sampling.hpp"

namespace nashmoser {
namespace {

struct Draw {
    GradedElement x;
    GradedElement v;
    GradedElement y;
};

SampleShape shape_for(const TameProblem& problem, Rng& rng, double decay) {
    SampleShape shape;
    shape.decay = std::max(0.0, rng.uniform(decay - 1.0, decay + 1.0));
    shape.mean_free = problem.mean_free();
    return shape;
}

// x and v are kept small enough that x and x + v both lie in U.
Draw draw(const TameProblem& problem, Rng& rng, const SamplerConfig& cfg, bool pair_in_domain) {
    const int order = problem.order();
    const double l = problem.domain_index();
    const double d = problem.constants().d;
    const double reach = pair_in_domain ? 0.5 * cfg.max_domain_norm : cfg.max_domain_norm;
    GradedElement x = scale_to(random_element(order, rng, shape_for(problem, rng, cfg.decay)), l,
                               rng.uniform(0.05, reach));
    GradedElement v = scale_to(random_element(order, rng, shape_for(problem, rng, cfg.decay)), l,
                               rng.uniform(0.05, reach));
    GradedElement y = scale_to(random_element(order, rng, shape_for(problem, rng, cfg.decay)), d,
                               rng.uniform(0.1, 1.0));
    return {std::move(x), std::move(v), std::move(y)};
}

// Running per-index maxima with the inputs that produced the overall worst case.
class RatioTracker {
public:
    explicit RatioTracker(std::vector<double> indices) : indices_(std::move(indices)) {
        best_.assign(indices_.size(), 0.0);
    }

    void offer(std::size_t slot, double lhs, double rhs, const std::function<nlohmann::json()>& witness,
               int condition_id) {
        if (rhs == 0.0) {
            if (lhs == 0.0) return;
            throw Error(ErrorCode::condition_violated,
                        "condition (" + std::to_string(condition_id) +
                            ") violated structurally: rhs = 0 with lhs = " + std::to_string(lhs),
                        lhs);
        }
        const double ratio = lhs / rhs;
        if (ratio > best_[slot]) best_[slot] = ratio;
        if (ratio > worst_) {
            worst_ = ratio;
            worst_input_ = witness();
            worst_input_["n"] = indices_[slot];
        }
    }

    void finish(ConditionReport& report) const {
        report.per_index.clear();
        report.estimated_constant = 0.0;
        for (std::size_t i = 0; i < indices_.size(); ++i) {
            report.per_index.emplace_back(indices_[i], best_[i]);
            report.estimated_constant = std::max(report.estimated_constant, best_[i]);
        }
        report.worst_case_input = worst_input_;
    }

private:
    std::vector<double> indices_;
    std::vector<double> best_;
    double worst_ = -1.0;
    nlohmann::json worst_input_ = nlohmann::json::object();
};

std::vector<double> default_theta_grid(int order) {
    std::vector<double> grid;
    for (double theta = 2.0; theta <= 2.0 * order; theta *= 2.0) grid.push_back(theta);
    return grid;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(1.0 + 0.05 * i);
    return grid;
}

ConditionReport estimate_growth(const TameProblem& problem, const SamplerConfig& cfg) {
    // Condition (5) with the declared lambda gives the constant; the smallest
    // lambda on the grid whose per-index constants do not grow with n is
    // reported as lambda-hat.
    const auto& c = problem.constants();
    std::vector<double> lambdas = cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
    if (std::find(lambdas.begin(), lambdas.end(), c.lambda) == lambdas.end()) {
        lambdas.push_back(c.lambda);
    }
    std::sort(lambdas.begin(), lambdas.end());

    Rng rng(cfg.seed);
    std::vector<Draw> draws;
    draws.reserve(static_cast<std::size_t>(cfg.samples));
    for (int s = 0; s < cfg.samples; ++s) draws.push_back(draw(problem, rng, cfg, false));

    std::vector<GradedElement> images;
    images.reserve(draws.size());
    for (const auto& dr : draws) images.push_back(problem.approx_inverse(dr.x, dr.y));

    ConditionReport report{5, 0.0, cfg.samples, {}, std::nullopt, {}};
    std::optional<double> lambda_hat;
    for (double lambda : lambdas) {
        RatioTracker tracker(cfg.indices);
        for (std::size_t s = 0; s < draws.size(); ++s) {
            const auto& dr = draws[s];
            const double y_d = seminorm(dr.y, c.d);
            for (std::size_t i = 0; i < cfg.indices.size(); ++i) {
                const double n = cfg.indices[i];
                const double shifted = lambda * n + c.d;
                const double lhs = seminorm(images[s], n);
                const double rhs = seminorm(dr.x, shifted) * y_d + seminorm(dr.y, shifted);
                tracker.offer(i, lhs, rhs,
                              [&] { return nlohmann::json{{"x", to_json(dr.x)}, {"y", to_json(dr.y)},
                                                          {"lambda", lambda}}; },
                              5);
            }
        }
        ConditionReport at_lambda;
        tracker.finish(at_lambda);
        if (lambda == c.lambda) {
            report.per_index = at_lambda.per_index;
            report.estimated_constant = at_lambda.estimated_constant;
            report.worst_case_input = at_lambda.worst_case_input;
        }
        if (!lambda_hat && at_lambda.per_index.size() >= 2) {
            std::vector<double> ns, logs;
            bool positive = true;
            for (auto [n, constant] : at_lambda.per_index) {
                if (!(constant > 0.0)) positive = false;
                ns.push_back(n);
                logs.push_back(std::log(constant));
            }
            if (positive && fit_line(ns, logs).slope <= cfg.lambda_slope_tol) lambda_hat = lambda;
        }
    }
    report.estimated_exponent = lambda_hat.value_or(2.0);
    return report;
}

ConditionReport estimate_neumann(const TameProblem& problem, const SamplerConfig& cfg) {
    const auto& c = problem.constants();
    const std::vector<double> thetas =
        cfg.theta_grid.empty() ? default_theta_grid(problem.order()) : cfg.theta_grid;

    Rng rng(cfg.seed);
    std::vector<Draw> draws;
    draws.reserve(static_cast<std::size_t>(cfg.samples));
    for (int s = 0; s < cfg.samples; ++s) draws.push_back(draw(problem, rng, cfg, false));

    // raw[t][i] = max over samples of |sum|_n / (|x|_n |y|_d + |y|_n)
    std::vector<std::vector<double>> raw(thetas.size(), std::vector<double>(cfg.indices.size(), 0.0));
    RatioTracker tracker(cfg.indices);
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        const double theta = thetas[t];
        const double theta_m = std::pow(theta, c.m);
        for (const auto& dr : draws) {
            const NeumannResult r = neumann_sum(problem, dr.x, theta, dr.y, cfg.neumann);
            const double y_d = seminorm(dr.y, c.d);
            for (std::size_t i = 0; i < cfg.indices.size(); ++i) {
                const double n = cfg.indices[i];
                const double lhs = seminorm(r.sum, n);
                const double rhs = seminorm(dr.x, n) * y_d + seminorm(dr.y, n);
                if (rhs > 0.0) raw[t][i] = std::max(raw[t][i], lhs / rhs);
                tracker.offer(i, lhs, theta_m * rhs,
                              [&] { return nlohmann::json{{"x", to_json(dr.x)}, {"y", to_json(dr.y)},
                                                          {"theta", theta}}; },
                              7);
            }
        }
    }
    ConditionReport report{7, 0.0, cfg.samples, {}, std::nullopt, {}};
    tracker.finish(report);
    if (thetas.size() >= 2) {
        double m_hat = -std::numeric_limits<double>::infinity();
        std::vector<double> log_theta;
        for (double theta : thetas) log_theta.push_back(std::log(theta));
        for (std::size_t i = 0; i < cfg.indices.size(); ++i) {
            std::vector<double> logs;
            for (std::size_t t = 0; t < thetas.size(); ++t) logs.push_back(std::log(raw[t][i]));
            m_hat = std::max(m_hat, fit_line(log_theta, logs).slope);
        }
        report.estimated_exponent = m_hat;
    }
    return report;
}

}  // namespace

nlohmann::json to_json(const ConditionReport& r) {
    nlohmann::json per_index = nlohmann::json::array();
    for (auto [n, constant] : r.per_index) per_index.push_back({{"n", n}, {"constant", constant}});
    nlohmann::json j{{"condition_id", r.condition_id},
                     {"estimated_constant", r.estimated_constant},
                     {"sample_count", r.sample_count},
                     {"per_index", per_index},
                     {"worst_case_input", r.worst_case_input}};
    if (r.estimated_exponent) {
        j[r.condition_id == 5 ? "estimated_lambda" : "estimated_m"] = *r.estimated_exponent;
    }
    return j;
}

ConditionReport estimate_condition(const TameProblem& problem, int condition_id,
                                   const SamplerConfig& cfg) {
    if (cfg.samples < 1) throw Error(ErrorCode::invalid_argument, "sampler needs >= 1 sample");
    if (cfg.indices.empty()) throw Error(ErrorCode::invalid_argument, "sampler needs an index grid");
    if (condition_id == 5) return estimate_growth(problem, cfg);
    if (condition_id == 7) return estimate_neumann(problem, cfg);
    if (condition_id < 1 || condition_id > 7) {
        throw Error(ErrorCode::invalid_argument, "condition id must be in 1..7");
    }

    const auto& c = problem.constants();
    Rng rng(cfg.seed);
    RatioTracker tracker(cfg.indices);
    for (int s = 0; s < cfg.samples; ++s) {
        const Draw dr = draw(problem, rng, cfg, condition_id == 6);
        // lhs element and a functor giving the rhs at index n
        GradedElement lhs_elem(problem.order());
        std::function<double(double)> rhs;
        nlohmann::json witness;
        switch (condition_id) {
            case 1:
                lhs_elem = problem.apply(dr.x);
                rhs = [&](double n) { return seminorm(dr.x, n); };
                witness = {{"x", to_json(dr.x)}};
                break;
            case 2:
                lhs_elem = problem.derivative(dr.x, dr.v);
                rhs = [&, v_d = seminorm(dr.v, c.d)](double n) {
                    return seminorm(dr.x, n) * v_d + seminorm(dr.v, n);
                };
                witness = {{"x", to_json(dr.x)}, {"v", to_json(dr.v)}};
                break;
            case 3:
            case 4:
                lhs_elem = defect(problem, dr.x, dr.y);
                rhs = [&, y_d = seminorm(dr.y, c.d), cubic = condition_id == 3](double n) {
                    const double x_n = seminorm(dr.x, n);
                    const double base = x_n * y_d + seminorm(dr.y, n);
                    return cubic ? base * x_n : base;
                };
                witness = {{"x", to_json(dr.x)}, {"y", to_json(dr.y)}};
                break;
            case 6:
                lhs_elem = remainder(problem, dr.x, dr.v);
                rhs = [&, v_l = seminorm(dr.v, c.l)](double n) {
                    return seminorm(dr.x, n) * v_l * v_l + v_l * seminorm(dr.v, n);
                };
                witness = {{"x", to_json(dr.x)}, {"v", to_json(dr.v)}};
                break;
            default:
                break;
        }
        for (std::size_t i = 0; i < cfg.indices.size(); ++i) {
            const double n = cfg.indices[i];
            tracker.offer(i, seminorm(lhs_elem, n), rhs(n), [&] { return witness; }, condition_id);
        }
    }
    ConditionReport report{condition_id, 0.0, cfg.samples, {}, std::nullopt, {}};
    tracker.finish(report);
    return report;
}

}  // namespace nashmoser
