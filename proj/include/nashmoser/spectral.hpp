#pragma once

#include <functional>
#include <vector>

#include "nashmoser/graded_space.hpp"

namespace nashmoser {

/// Samples of a truncated element on an oversampled uniform grid
/// t_j = 2 pi j / M, M = smallest power of two >= oversample * (2N + 1).
/// Nonlinear terms are formed pointwise on the grid and projected back onto
/// |k| <= N. With oversample >= 2 quadratic products are alias free.
class SpectralGrid {
public:
    explicit SpectralGrid(int order, int oversample = 2);

    int order() const noexcept { return order_; }
    int points() const noexcept { return points_; }
    double node(int j) const;

    std::vector<Coeff> to_samples(const GradedElement& x) const;
    GradedElement from_samples(const std::vector<Coeff>& samples) const;

private:
    int order_;
    int points_;
};

/// Pointwise product a(t) b(t), truncated.
GradedElement product(const GradedElement& a, const GradedElement& b, int oversample = 2);

/// f(t, u(t)) evaluated on the grid, truncated.
GradedElement compose(const GradedElement& u, const std::function<Coeff(double, Coeff)>& f,
                      int oversample = 2);

/// f(t, u(t)) * v(t), truncated.
GradedElement compose_times(const GradedElement& u, const GradedElement& v,
                            const std::function<Coeff(double, Coeff)>& f, int oversample = 2);

}  // namespace nashmoser
