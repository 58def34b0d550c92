#pragma once

// Geometry and grid numerics on the circle [-pi, pi).

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace swarmring {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point on the circle, always stored in the half-open interval [-pi, pi).
class Angle {
public:
    constexpr Angle() = default;

    /// Wraps an arbitrary finite angle. Throws InvalidArgument on NaN/inf.
    static Angle radians(double x);

    constexpr double value() const noexcept { return value_; }

    friend constexpr bool operator==(Angle, Angle) = default;

private:
    explicit constexpr Angle(double wrapped) : value_(wrapped) {}
    double value_ = 0.0;

    friend Angle wrap(double x);
};

/// Representative of x modulo 2*pi in [-pi, pi); pi itself maps to -pi.
Angle wrap(double x);

/// wrap(a - b): the signed position of a relative to b.
Angle wrapped_difference(Angle a, Angle b);

/// Uniform periodic grid of M points: -pi + k * 2pi/M for k = 0..M-1.
class Grid {
public:
    explicit Grid(std::size_t points = 256);

    std::size_t size() const noexcept { return size_; }
    double spacing() const noexcept { return spacing_; }
    double point(std::size_t k) const noexcept { return -kPi + static_cast<double>(k) * spacing_; }
    std::vector<double> points() const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.size_ == b.size_; }

private:
    std::size_t size_;
    double spacing_;
};

/// Real samples of a function on a Grid.
///
/// Fields are plain values: copying copies the samples. Finiteness is not
/// checked on construction; integrators check their states after each step.
class Field {
public:
    explicit Field(const Grid& grid);
    Field(const Grid& grid, std::vector<double> values);

    /// Samples fn at every grid point.
    template <class Fn>
    static Field sample(const Grid& grid, Fn&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid.point(k));
        return Field(grid, std::move(v));
    }

    /// Samples fn at the grid offsets m * dx (wrapped), m = 0..M-1. This is the
    /// layout expected for the kernel argument of circular_convolution.
    template <class Fn>
    static Field sample_offsets(const Grid& grid, Fn&& fn) {
        std::vector<double> v(grid.size());
        for (std::size_t m = 0; m < v.size(); ++m) v[m] = fn(static_cast<double>(m) * grid.spacing());
        return Field(grid, std::move(v));
    }

    static Field constant(const Grid& grid, double c);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double c) noexcept;

    /// this += c * other
    Field& add_scaled(const Field& other, double c);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(Field a, double c) { return a *= c; }
    friend Field operator*(double c, Field a) { return a *= c; }

    /// Pointwise product.
    friend Field operator*(const Field& a, const Field& b);

    friend bool operator==(const Field& a, const Field& b) { return a.grid_ == b.grid_ && a.values_ == b.values_; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Throws InvalidArgument unless a and b live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* where);

/// Periodic rectangle rule dx * sum(values).
double integrate(const Field& f);

/// L2 norm sqrt(integrate(f^2)).
double l2_norm(const Field& f);

/// Trapezoid accumulation from -pi: result[0] = 0,
/// result[k] = result[k-1] + dx/2 (f[k-1] + f[k]).
Field cumulative_integral(const Field& f);

/// Second-order central difference with periodic wraparound. Requires M >= 3.
Field derivative(const Field& f);

/// Linear interpolation between the bracketing nodes, periodic across the seam.
/// Exact at grid nodes.
double interp_periodic(const Field& f, Angle x);

/// Circular convolution against a fixed kernel, evaluated with real FFTs.
///
/// result[k] = dx * sum_j kernel[(k - j) mod M] * f[j], where the kernel is
/// laid out by offset (see Field::sample_offsets). The kernel spectrum is
/// computed once; apply() is const and safe to call from several threads.
class CircularConvolver {
public:
    explicit CircularConvolver(const Field& kernel);

    Field apply(const Field& f) const;
    const Grid& grid() const noexcept { return grid_; }

private:
    Grid grid_;
    std::vector<std::complex<double>> spectrum_;  // scaled by dx / M
};

/// One-shot convolution. Prefer CircularConvolver when the kernel is reused.
Field circular_convolution(const Field& kernel, const Field& f);

}  // namespace swarmring
