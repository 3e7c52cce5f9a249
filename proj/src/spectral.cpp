#include "nashmoser/spectral.hpp"

#include <fftw3.h>

#include <bit>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "nashmoser/error.hpp"

namespace nashmoser {
namespace {

// FFTW planning is not thread safe; execution of an existing plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Per-thread transform buffers and plans for one grid size.
class Workspace {
public:
    explicit Workspace(int points) : points_(points) {
        buffer_ = fftw_alloc_complex(static_cast<std::size_t>(points));
        if (buffer_ == nullptr) throw Error(ErrorCode::internal, "fftw allocation failed");
        std::lock_guard lock(planner_mutex());
        to_grid_ = fftw_plan_dft_1d(points, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
        to_modes_ = fftw_plan_dft_1d(points, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~Workspace() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(to_grid_);
        fftw_destroy_plan(to_modes_);
        fftw_free(buffer_);
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    Coeff* data() { return reinterpret_cast<Coeff*>(buffer_); }
    void forward_to_grid() { fftw_execute(to_grid_); }
    void back_to_modes() { fftw_execute(to_modes_); }
    int points() const { return points_; }

private:
    int points_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan to_grid_ = nullptr;
    fftw_plan to_modes_ = nullptr;
};

Workspace& workspace(int points) {
    thread_local std::map<int, std::unique_ptr<Workspace>> cache;
    auto& slot = cache[points];
    if (!slot) slot = std::make_unique<Workspace>(points);
    return *slot;
}

int grid_points(int order, int oversample) {
    if (oversample < 1) throw Error(ErrorCode::invalid_argument, "oversample must be >= 1");
    const auto needed = static_cast<unsigned>(oversample * (2 * order + 1));
    return static_cast<int>(std::bit_ceil(needed));
}

}  // namespace

SpectralGrid::SpectralGrid(int order, int oversample)
    : order_(order), points_(grid_points(order, oversample)) {
    if (order < 1) throw Error(ErrorCode::invalid_argument, "truncation order must be positive");
}

double SpectralGrid::node(int j) const { return 2.0 * std::numbers::pi * j / points_; }

std::vector<Coeff> SpectralGrid::to_samples(const GradedElement& x) const {
    if (x.order() != order_) throw Error(ErrorCode::dimension_mismatch, "grid/element order mismatch");
    Workspace& ws = workspace(points_);
    Coeff* buf = ws.data();
    std::memset(static_cast<void*>(buf), 0, sizeof(Coeff) * static_cast<std::size_t>(points_));
    for (int k = -order_; k <= order_; ++k) buf[(k + points_) % points_] = x.at(k);
    ws.forward_to_grid();
    return {buf, buf + points_};
}

GradedElement SpectralGrid::from_samples(const std::vector<Coeff>& samples) const {
    if (samples.size() != static_cast<std::size_t>(points_)) {
        throw Error(ErrorCode::dimension_mismatch, "sample count does not match grid");
    }
    Workspace& ws = workspace(points_);
    Coeff* buf = ws.data();
    std::copy(samples.begin(), samples.end(), buf);
    ws.back_to_modes();
    GradedElement out(order_);
    const double inv = 1.0 / points_;
    for (int k = -order_; k <= order_; ++k) out.set(k, buf[(k + points_) % points_] * inv);
    return out;
}

GradedElement product(const GradedElement& a, const GradedElement& b, int oversample) {
    if (a.order() != b.order()) throw Error(ErrorCode::dimension_mismatch, "product order mismatch");
    const SpectralGrid grid(a.order(), oversample);
    auto sa = grid.to_samples(a);
    const auto sb = grid.to_samples(b);
    for (std::size_t j = 0; j < sa.size(); ++j) sa[j] *= sb[j];
    return grid.from_samples(sa);
}

GradedElement compose(const GradedElement& u, const std::function<Coeff(double, Coeff)>& f,
                      int oversample) {
    const SpectralGrid grid(u.order(), oversample);
    auto s = grid.to_samples(u);
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = f(grid.node(static_cast<int>(j)), s[j]);
    return grid.from_samples(s);
}

GradedElement compose_times(const GradedElement& u, const GradedElement& v,
                            const std::function<Coeff(double, Coeff)>& f, int oversample) {
    if (u.order() != v.order()) throw Error(ErrorCode::dimension_mismatch, "order mismatch");
    const SpectralGrid grid(u.order(), oversample);
    auto su = grid.to_samples(u);
    const auto sv = grid.to_samples(v);
    for (std::size_t j = 0; j < su.size(); ++j) {
        su[j] = f(grid.node(static_cast<int>(j)), su[j]) * sv[j];
    }
    return grid.from_samples(su);
}

}  // namespace nashmoser
