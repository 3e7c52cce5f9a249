#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nashmoser/neumann.hpp"
#include "nashmoser/problem.hpp"

namespace nashmoser {

/// Seeded sample suite for the empirical check of conditions (1)..(7).
/// Elements are drawn with |c_k| ~ (1+|k|)^(-decay) and rescaled so that
/// x stays inside U.
struct SamplerConfig {
    int samples = 200;
    std::uint64_t seed = 11;
    std::vector<double> indices{0, 1, 2, 4, 8};
    double decay = 3.0;
    double max_domain_norm = 0.9;      // |x|_l drawn in [0.05, max_domain_norm]
    std::vector<double> theta_grid;    // condition (7); empty means {2, 4, ..., <= 2N}
    std::vector<double> lambda_grid;   // condition (5); empty means {1.00, 1.05, ..., 1.95}
    double lambda_slope_tol = 0.01;    // max slope of log C_lambda(n) vs n accepted as bounded
    NeumannOptions neumann;
};

struct ConditionReport {
    int condition_id = 0;
    double estimated_constant = 0.0;  // max over the index grid
    int sample_count = 0;
    std::vector<std::pair<double, double>> per_index;  // (n, constant at n)
    std::optional<double> estimated_exponent;          // lambda-hat for (5), m-hat for (7)
    nlohmann::json worst_case_input;
};

nlohmann::json to_json(const ConditionReport& r);

/// Max over samples of lhs/rhs for the named condition. Deterministic in the
/// seed. Throws condition_violated if some rhs vanishes while lhs does not.
ConditionReport estimate_condition(const TameProblem& problem, int condition_id,
                                   const SamplerConfig& config);

}  // namespace nashmoser
