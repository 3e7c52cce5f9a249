#include "nashmoser/fit.hpp"

#include "nashmoser/error.hpp"

namespace nashmoser {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::insufficient_rows, "line fit needs at least two points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::degenerate_input, "line fit needs distinct abscissae");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx, static_cast<int>(x.size())};
}

}  // namespace nashmoser
