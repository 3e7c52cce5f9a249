#include "nashmoser/graded_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nashmoser/error.hpp"

namespace nashmoser {

SeminormIndex::SeminormIndex(double value) : value_(value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw Error(ErrorCode::invalid_argument,
                    "seminorm index must be finite and >= 0, got " + std::to_string(value));
    }
}

SmoothingParam::SmoothingParam(double theta) : theta_(theta) {
    if (!(theta >= 1.0) || std::isnan(theta)) {
        throw Error(ErrorCode::invalid_argument,
                    "smoothing parameter must be >= 1, got " + std::to_string(theta));
    }
}

GradedElement::GradedElement(int order) : order_(order) {
    if (order < 1) {
        throw Error(ErrorCode::invalid_argument, "truncation order must be positive");
    }
    coeffs_.assign(2 * static_cast<std::size_t>(order) + 1, Coeff{});
}

GradedElement::GradedElement(int order, std::vector<Coeff> coeffs)
    : order_(order), coeffs_(std::move(coeffs)) {
    if (order < 1) {
        throw Error(ErrorCode::invalid_argument, "truncation order must be positive");
    }
    if (coeffs_.size() != 2 * static_cast<std::size_t>(order) + 1) {
        throw Error(ErrorCode::dimension_mismatch,
                    "expected " + std::to_string(2 * order + 1) + " coefficients, got " +
                        std::to_string(coeffs_.size()));
    }
    if (!all_finite()) {
        throw Error(ErrorCode::invalid_argument, "coefficients must be finite");
    }
}

GradedElement GradedElement::mode(int order, int k, Coeff amplitude) {
    GradedElement e(order);
    e.set(k, amplitude);
    return e;
}

std::size_t GradedElement::slot(int k) const {
    if (k < -order_ || k > order_) {
        throw Error(ErrorCode::invalid_argument,
                    "frequency " + std::to_string(k) + " outside truncation " +
                        std::to_string(order_));
    }
    return static_cast<std::size_t>(k + order_);
}

Coeff GradedElement::at(int k) const { return coeffs_[slot(k)]; }

void GradedElement::set(int k, Coeff value) {
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw Error(ErrorCode::invalid_argument, "coefficients must be finite");
    }
    coeffs_[slot(k)] = value;
}

bool GradedElement::is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const Coeff& c) { return c == Coeff{}; });
}

bool GradedElement::all_finite() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Coeff& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

void GradedElement::require_same_order(const GradedElement& other) const {
    if (other.order_ != order_) {
        throw Error(ErrorCode::dimension_mismatch,
                    "truncation orders differ: " + std::to_string(order_) + " vs " +
                        std::to_string(other.order_));
    }
}

GradedElement& GradedElement::operator+=(const GradedElement& other) {
    require_same_order(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

GradedElement& GradedElement::operator-=(const GradedElement& other) {
    require_same_order(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

GradedElement& GradedElement::operator*=(Coeff scale) {
    for (auto& c : coeffs_) c *= scale;
    return *this;
}

double seminorm(const GradedElement& x, SeminormIndex n, const Grading& grading) {
    // Evaluated in log space: (1+|k|)^n overflows long before the product does.
    const int order = x.order();
    const auto coeffs = x.coeffs();
    double best = 0.0;
    for (int k = -order; k <= order; ++k) {
        const double mag = std::abs(coeffs[static_cast<std::size_t>(k + order)]);
        if (mag == 0.0) continue;
        const double log_weight = grading.power * n.value() * std::log(grading.base + std::abs(k));
        best = std::max(best, std::exp(log_weight + std::log(mag)));
    }
    return best;
}

GradedElement smooth(const GradedElement& x, SmoothingParam theta) {
    GradedElement out(x.order());
    const int order = x.order();
    for (int k = -order; k <= order; ++k) {
        if (1.0 + std::abs(k) <= theta.value()) out.coeffs_mut()[k + order] = x.coeffs()[k + order];
    }
    return out;
}

GradedElement rough(const GradedElement& x, SmoothingParam theta) {
    GradedElement out = x;
    const int order = x.order();
    for (int k = -order; k <= order; ++k) {
        if (1.0 + std::abs(k) <= theta.value()) out.coeffs_mut()[k + order] = Coeff{};
    }
    return out;
}

double check_interpolation(const GradedElement& x, SeminormIndex k, SeminormIndex l,
                           SeminormIndex n, const Grading& grading) {
    if (!(k.value() <= l.value() && l.value() <= n.value())) {
        throw Error(ErrorCode::invalid_argument, "interpolation requires k <= l <= n");
    }
    if (x.is_zero()) {
        throw Error(ErrorCode::degenerate_input, "degenerate input: zero element");
    }
    const double alpha = n.value() == k.value() ? 0.0 : (l - k) / (n - k);
    const double log_lhs = std::log(seminorm(x, l, grading));
    const double log_rhs = (1.0 - alpha) * std::log(seminorm(x, k, grading)) +
                           alpha * std::log(seminorm(x, n, grading));
    return std::exp(log_lhs - log_rhs);
}

nlohmann::json to_json(const GradedElement& x) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int k = -x.order(); k <= x.order(); ++k) {
        const Coeff c = x.at(k);
        coeffs.push_back({k, c.real(), c.imag()});
    }
    return {{"order", x.order()}, {"coeffs", std::move(coeffs)}};
}

GradedElement element_from_json(const nlohmann::json& j) {
    try {
        const int order = j.at("order").get<int>();
        GradedElement out(order);
        std::vector<bool> seen(out.size(), false);
        for (const auto& triple : j.at("coeffs")) {
            if (!triple.is_array() || triple.size() != 3) {
                throw Error(ErrorCode::invalid_argument, "coefficient entries must be [k, re, im]");
            }
            const int k = triple[0].get<int>();
            out.set(k, Coeff{triple[1].get<double>(), triple[2].get<double>()});
            seen[static_cast<std::size_t>(k + order)] = true;
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
            throw Error(ErrorCode::dimension_mismatch, "element JSON must list every frequency");
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_argument, std::string("malformed element JSON: ") + e.what());
    }
}

}  // namespace nashmoser
