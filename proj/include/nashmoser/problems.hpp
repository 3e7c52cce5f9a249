#pragma once

#include <optional>
#include <string>

#include "nashmoser/conditions.hpp"
#include "nashmoser/problem.hpp"

namespace nashmoser {

/// (sqrt(5) - 1) / 2
double golden_mean();

struct DivisorScan {
    double floor = 0.0;  // min over 0 < |k| <= N of |e^{2 pi i k alpha} - 1| (1+|k|)^d
    int argmin = 0;
};

DivisorScan scan_divisors(double alpha, int order, double d);

/// Options shared by the small-divisor instances P2 and P3. Unset m / lambda
/// are measured with estimate_condition on the calibration suite.
struct SmallDivisorOptions {
    double d = 2.0;
    double l = 2.0;
    double divisor_floor = 1e-6;
    std::optional<double> m;
    std::optional<double> lambda;
    SamplerConfig calibration = [] {
        SamplerConfig c;
        c.samples = 40;
        return c;
    }();
};

/// phi = identity.
ProblemPtr make_p0(int order);

/// phi(x) = x + eps (G x)^2 with (G x)_k = x_k / (1+|k|)^2, L(x) = I.
ProblemPtr make_p1(int order, double epsilon);

/// phi(u) = P[u(t + 2 pi alpha) - u(t) + eps u^2] on mean-zero functions,
/// P the mean projection; L solves the unperturbed cohomological equation.
ProblemPtr make_p2(int order, double epsilon, double alpha, const SmallDivisorOptions& options = {});

/// phi(u) = P[u(t + 2 pi alpha) - u(t) + eps (sin(t + u) - sin t)], same L as P2.
ProblemPtr make_p3(int order, double epsilon, double alpha, const SmallDivisorOptions& options = {});

/// eps sin(t + u(t)), the uncentred composition term of P3.
GradedElement p3_composition(const GradedElement& u, double epsilon);

struct ProblemSpec {
    std::string id = "P2";
    int order = 128;
    double epsilon = 1e-3;
    double alpha = golden_mean();
    SmallDivisorOptions small_divisor;
};

ProblemPtr make_problem(const ProblemSpec& spec);

}  // namespace nashmoser
