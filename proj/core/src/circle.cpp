#include "swarmring/circle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "swarmring/errors.hpp"

namespace swarmring {

namespace {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

using RealBuffer = std::unique_ptr<double, FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex, FftwFree>;

struct PlanPair {
    fftw_plan forward = nullptr;   // r2c, M -> M/2 + 1
    fftw_plan backward = nullptr;  // c2r, M/2 + 1 -> M (unnormalized)
};

// FFTW's planner is not thread-safe; plans are created once per size under a
// lock and then only used through the new-array execute functions.
const PlanPair& plans_for(std::size_t m) {
    static std::mutex mutex;
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    const int n = static_cast<int>(m);
    RealBuffer real(fftw_alloc_real(m));
    ComplexBuffer spec(fftw_alloc_complex(m / 2 + 1));
    PlanPair p;
    p.forward = fftw_plan_dft_r2c_1d(n, real.get(), spec.get(), FFTW_ESTIMATE);
    p.backward = fftw_plan_dft_c2r_1d(n, spec.get(), real.get(), FFTW_ESTIMATE | FFTW_DESTROY_INPUT);
    return cache.emplace(m, p).first->second;
}

struct Scratch {
    RealBuffer real;
    ComplexBuffer spec;
};

Scratch& scratch_for(std::size_t m) {
    thread_local std::map<std::size_t, Scratch> buffers;
    auto it = buffers.find(m);
    if (it == buffers.end()) {
        Scratch s{RealBuffer(fftw_alloc_real(m)), ComplexBuffer(fftw_alloc_complex(m / 2 + 1))};
        it = buffers.emplace(m, std::move(s)).first;
    }
    return it->second;
}

}  // namespace

Angle Angle::radians(double x) { return wrap(x); }

Angle wrap(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("wrap: angle must be finite");
    if (x >= -kPi && x < kPi) return Angle(x);
    double r = std::fmod(x + kPi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    double v = r - kPi;
    if (v >= kPi) v = -kPi;
    if (v < -kPi) v = -kPi;
    return Angle(v);
}

Angle wrapped_difference(Angle a, Angle b) { return wrap(a.value() - b.value()); }

Grid::Grid(std::size_t points) : size_(points), spacing_(points ? kTwoPi / static_cast<double>(points) : 0.0) {
    if (points == 0) throw InvalidArgument("Grid: point count must be positive");
}

std::vector<double> Grid::points() const {
    std::vector<double> p(size_);
    for (std::size_t k = 0; k < size_; ++k) p[k] = point(k);
    return p;
}

Field::Field(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw InvalidArgument("Field: expected " + std::to_string(grid_.size()) + " samples, got " +
                              std::to_string(values_.size()));
    }
}

Field Field::constant(const Grid& grid, double c) { return Field(grid, std::vector<double>(grid.size(), c)); }

double Field::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other, "Field::operator+=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other, "Field::operator-=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field& Field::operator*=(double c) noexcept {
    for (double& v : values_) v *= c;
    return *this;
}

Field& Field::add_scaled(const Field& other, double c) {
    require_same_grid(*this, other, "Field::add_scaled");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += c * other.values_[k];
    return *this;
}

Field operator*(const Field& a, const Field& b) {
    require_same_grid(a, b, "Field::operator*");
    Field out(a.grid_);
    for (std::size_t k = 0; k < out.values_.size(); ++k) out.values_[k] = a.values_[k] * b.values_[k];
    return out;
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid() == b.grid())) {
        throw InvalidArgument(std::string(where) + ": grid mismatch (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + " points)");
    }
}

double integrate(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().spacing();
}

double l2_norm(const Field& f) {
    double s = 0.0;
    for (double v : f.values()) s += v * v;
    return std::sqrt(s * f.grid().spacing());
}

Field cumulative_integral(const Field& f) {
    Field out(f.grid());
    const double half_dx = 0.5 * f.grid().spacing();
    for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + half_dx * (f[k - 1] + f[k]);
    return out;
}

Field derivative(const Field& f) {
    const std::size_t m = f.size();
    if (m < 3) throw InvalidArgument("derivative: grid needs at least 3 points");
    Field out(f.grid());
    const double inv = 1.0 / (2.0 * f.grid().spacing());
    out[0] = (f[1] - f[m - 1]) * inv;
    for (std::size_t k = 1; k + 1 < m; ++k) out[k] = (f[k + 1] - f[k - 1]) * inv;
    out[m - 1] = (f[0] - f[m - 2]) * inv;
    return out;
}

double interp_periodic(const Field& f, Angle x) {
    const std::size_t m = f.size();
    const double s = (x.value() + kPi) / f.grid().spacing();
    const double nearest = std::round(s);
    if (std::abs(s - nearest) < 1e-9) return f[static_cast<std::size_t>(nearest) % m];
    const double lower = std::floor(s);
    const double w = s - lower;
    const std::size_t k = static_cast<std::size_t>(lower) % m;
    return (1.0 - w) * f[k] + w * f[(k + 1) % m];
}

CircularConvolver::CircularConvolver(const Field& kernel) : grid_(kernel.grid()) {
    const std::size_t m = grid_.size();
    const PlanPair& plans = plans_for(m);
    Scratch& s = scratch_for(m);
    std::copy(kernel.values().begin(), kernel.values().end(), s.real.get());
    fftw_execute_dft_r2c(plans.forward, s.real.get(), s.spec.get());

    const double scale = grid_.spacing() / static_cast<double>(m);
    spectrum_.resize(m / 2 + 1);
    for (std::size_t k = 0; k < spectrum_.size(); ++k) {
        spectrum_[k] = std::complex<double>(s.spec.get()[k][0], s.spec.get()[k][1]) * scale;
    }
}

Field CircularConvolver::apply(const Field& f) const {
    if (!(f.grid() == grid_)) throw InvalidArgument("circular_convolution: grid mismatch");
    const std::size_t m = grid_.size();
    const PlanPair& plans = plans_for(m);
    Scratch& s = scratch_for(m);

    std::copy(f.values().begin(), f.values().end(), s.real.get());
    fftw_execute_dft_r2c(plans.forward, s.real.get(), s.spec.get());
    for (std::size_t k = 0; k < spectrum_.size(); ++k) {
        const std::complex<double> z(s.spec.get()[k][0], s.spec.get()[k][1]);
        const std::complex<double> p = z * spectrum_[k];
        s.spec.get()[k][0] = p.real();
        s.spec.get()[k][1] = p.imag();
    }
    fftw_execute_dft_c2r(plans.backward, s.spec.get(), s.real.get());

    Field out(grid_);
    std::copy(s.real.get(), s.real.get() + m, out.values().begin());
    return out;
}

Field circular_convolution(const Field& kernel, const Field& f) {
    require_same_grid(kernel, f, "circular_convolution");
    return CircularConvolver(kernel).apply(f);
}

}  // namespace swarmring
