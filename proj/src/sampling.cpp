#include "nashmoser/sampling.hpp"

#include <cmath>
#include <numbers>

#include "nashmoser/error.hpp"

namespace nashmoser {

GradedElement random_element(int order, Rng& rng, const SampleShape& shape) {
    GradedElement x(order);
    const int top = shape.band_limit > 0 ? std::min(shape.band_limit, order) : order;
    auto draw = [&](int k) {
        const double mag = rng.uniform(0.5, 1.0) * std::pow(1.0 + std::abs(k), -shape.decay);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        return std::polar(mag, phase);
    };
    if (!shape.mean_free) {
        const Coeff c0 = draw(0);
        x.set(0, shape.real_valued ? Coeff{std::abs(c0) * (c0.real() < 0 ? -1.0 : 1.0), 0.0} : c0);
    }
    for (int k = 1; k <= top; ++k) {
        const Coeff c = draw(k);
        x.set(k, c);
        x.set(-k, shape.real_valued ? std::conj(c) : draw(-k));
    }
    return x;
}

GradedElement scale_to(const GradedElement& x, SeminormIndex n, double target) {
    const double norm = seminorm(x, n);
    if (norm == 0.0) {
        throw Error(ErrorCode::degenerate_input, "degenerate input: cannot rescale zero element");
    }
    return (target / norm) * x;
}

}  // namespace nashmoser
