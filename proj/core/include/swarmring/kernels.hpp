#pragma once

// Closed-form kernels, target densities and the tracking-mean schedule.

#include "swarmring/circle.hpp"

namespace swarmring {

struct InteractionParams {
    double length_scale = kPi / 4.0;  // L > 0

    friend bool operator==(const InteractionParams&, const InteractionParams&) = default;
};

struct SmoothingParams {
    double h = 0.7;  // bandwidth; the Von Mises concentration is 1/h^2

    friend bool operator==(const SmoothingParams&, const SmoothingParams&) = default;
};

enum class TargetKind { bimodal, monomodal, tracking };

struct TargetParams {
    TargetKind kind = TargetKind::bimodal;
    double mu1 = -kPi / 2.0;
    double mu2 = kPi / 2.0;  // unused for monomodal/tracking
    double kappa = 2.0;
    double mass = 50.0;  // N

    friend bool operator==(const TargetParams&, const TargetParams&) = default;
};

void validate(const InteractionParams& p);
void validate(const SmoothingParams& p);
void validate(const TargetParams& p);

/// Modified Bessel function of the first kind, order 0, by its power series.
double bessel_i0(double x);

/// sgn(x) exp(-|x| / L) on the wrapped argument. Zero at 0 and at the seam
/// (|x| within kSeamTolerance of pi), so it is odd on the whole circle.
inline constexpr double kSeamTolerance = 1e-12;

double interaction_kernel(Angle x, const InteractionParams& p);

/// The interaction kernel laid out by offset for circular_convolution. The
/// seam offset (exactly pi, present for even M) takes the mean of the two
/// one-sided limits, 0, so the sampled kernel is exactly odd.
Field interaction_kernel_field(const Grid& grid, const InteractionParams& p);

/// Unit-mass Von Mises kernel exp(cos(x)/h^2) / (2 pi I0(1/h^2)).
double von_mises_kernel(Angle x, const SmoothingParams& p);

/// Von Mises density with mean mu and concentration kappa, scaled to `mass`.
double von_mises_density(double x, double mu, double kappa, double mass);

/// Desired density sampled on the grid. Tracking targets are evaluated at
/// t = 0; see target_density_at for the time-varying form.
Field target_density(const TargetParams& params, const Grid& grid);

/// Desired density at time t: static kinds ignore t, tracking uses
/// tracking_mean(t) as the mean.
Field target_density_at(const TargetParams& params, const Grid& grid, double t);

/// Partial time derivative of target_density_at (zero for static kinds).
Field target_density_rate(const TargetParams& params, const Grid& grid, double t);

/// Piecewise-linear mean schedule: 0 until t = 2, +1 rad/unit up to pi/3,
/// -1 down to -pi/3, +1 back to 0, then held at 0.
Angle tracking_mean(double t);

/// d/dt of tracking_mean; at breakpoints the right derivative is returned.
double tracking_mean_rate(double t);

}  // namespace swarmring
