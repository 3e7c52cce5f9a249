#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

namespace nashmoser {

using Coeff = std::complex<double>;

/// Grading index n of the seminorm family |.|_n. Real valued, n >= 0.
class SeminormIndex {
public:
    SeminormIndex(double value);  // NOLINT: implicit so call sites read seminorm(x, 2.5)
    double value() const noexcept { return value_; }
    operator double() const noexcept { return value_; }  // NOLINT

private:
    double value_;
};

/// Smoothing parameter theta >= 1 of S_theta.
class SmoothingParam {
public:
    SmoothingParam(double theta);  // NOLINT
    double value() const noexcept { return theta_; }
    operator double() const noexcept { return theta_; }  // NOLINT

private:
    double theta_;
};

/// Truncated Fourier coefficient sequence c_k, |k| <= N, carrying the whole
/// seminorm family |x|_n = sup_k (1+|k|)^n |c_k|.
class GradedElement {
public:
    explicit GradedElement(int order);
    GradedElement(int order, std::vector<Coeff> coeffs);

    /// amplitude at frequency k, zero elsewhere
    static GradedElement mode(int order, int k, Coeff amplitude);

    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    Coeff at(int k) const;
    void set(int k, Coeff value);

    std::span<const Coeff> coeffs() const noexcept { return coeffs_; }
    std::span<Coeff> coeffs_mut() noexcept { return coeffs_; }

    bool is_zero() const noexcept;
    bool all_finite() const noexcept;

    GradedElement& operator+=(const GradedElement& other);
    GradedElement& operator-=(const GradedElement& other);
    GradedElement& operator*=(Coeff scale);

    friend GradedElement operator+(GradedElement a, const GradedElement& b) { return a += b; }
    friend GradedElement operator-(GradedElement a, const GradedElement& b) { return a -= b; }
    friend GradedElement operator*(Coeff s, GradedElement a) { return a *= s; }
    friend GradedElement operator*(GradedElement a, Coeff s) { return a *= s; }
    friend bool operator==(const GradedElement& a, const GradedElement& b) = default;

private:
    std::size_t slot(int k) const;
    void require_same_order(const GradedElement& other) const;

    int order_;
    std::vector<Coeff> coeffs_;  // index k + N
};

/// Weight (base + |k|)^(power * n). The default is the standard grading;
/// other values exist for negative-control fixtures.
struct Grading {
    double base = 1.0;
    double power = 1.0;
};

double seminorm(const GradedElement& x, SeminormIndex n, const Grading& grading = {});

/// Sharp cutoff: keeps c_k with 1 + |k| <= theta.
GradedElement smooth(const GradedElement& x, SmoothingParam theta);

/// x - smooth(x, theta); the two pieces partition the coefficients exactly.
GradedElement rough(const GradedElement& x, SmoothingParam theta);

/// |x|_l / (|x|_k^(1-a) |x|_n^a) with a = (l-k)/(n-k). Requires k <= l <= n and x != 0.
double check_interpolation(const GradedElement& x, SeminormIndex k, SeminormIndex l,
                           SeminormIndex n, const Grading& grading = {});

// {"order": N, "coeffs": [[k, re, im], ...]} ordered by frequency.
nlohmann::json to_json(const GradedElement& x);
GradedElement element_from_json(const nlohmann::json& j);

}  // namespace nashmoser
