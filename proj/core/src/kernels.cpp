#include "swarmring/kernels.hpp"

#include <cmath>

#include "swarmring/errors.hpp"

namespace swarmring {

namespace {

constexpr double kRampStart = 2.0;
constexpr double kPeak = kPi / 3.0;
constexpr double kPeakTime = kRampStart + kPeak;             // 2 + pi/3
constexpr double kTroughTime = kPeakTime + 2.0 * kPeak;      // 2 + pi
constexpr double kEndTime = kTroughTime + kPeak;             // 2 + 4pi/3

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void validate(const InteractionParams& p) {
    if (!positive_finite(p.length_scale)) throw InvalidArgument("interaction length scale L must be > 0");
}

void validate(const SmoothingParams& p) {
    if (!positive_finite(p.h)) throw InvalidArgument("smoothing parameter h must be > 0");
}

void validate(const TargetParams& p) {
    if (!positive_finite(p.kappa)) throw InvalidArgument("target kappa must be > 0");
    if (!positive_finite(p.mass)) throw InvalidArgument("target mass N must be > 0");
    if (!std::isfinite(p.mu1) || !std::isfinite(p.mu2)) throw InvalidArgument("target means must be finite");
}

double bessel_i0(double x) {
    // sum_k ((x/2)^(2k)) / (k!)^2, stopped once a term no longer moves the sum.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

double interaction_kernel(Angle x, const InteractionParams& p) {
    const double v = x.value();
    if (v == 0.0 || std::abs(v) >= kPi - kSeamTolerance) return 0.0;
    const double mag = std::exp(-std::abs(v) / p.length_scale);
    return v > 0.0 ? mag : -mag;
}

Field interaction_kernel_field(const Grid& grid, const InteractionParams& p) {
    validate(p);
    const std::size_t m = grid.size();
    Field k(grid);
    for (std::size_t j = 1; 2 * j < m; ++j) {
        k[j] = interaction_kernel(Angle::radians(static_cast<double>(j) * grid.spacing()), p);
        k[m - j] = -k[j];
    }
    return k;
}

double von_mises_kernel(Angle x, const SmoothingParams& p) {
    const double kappa = 1.0 / (p.h * p.h);
    return std::exp(kappa * std::cos(x.value())) / (kTwoPi * bessel_i0(kappa));
}

double von_mises_density(double x, double mu, double kappa, double mass) {
    return mass * std::exp(kappa * std::cos(x - mu)) / (kTwoPi * bessel_i0(kappa));
}

Field target_density(const TargetParams& params, const Grid& grid) { return target_density_at(params, grid, 0.0); }

Field target_density_at(const TargetParams& params, const Grid& grid, double t) {
    validate(params);
    switch (params.kind) {
        case TargetKind::bimodal: {
            const double scale = params.mass / (4.0 * kPi * bessel_i0(params.kappa));
            return Field::sample(grid, [&](double x) {
                return scale * (std::exp(params.kappa * std::cos(x - params.mu1)) +
                                std::exp(params.kappa * std::cos(x - params.mu2)));
            });
        }
        case TargetKind::monomodal:
            return Field::sample(grid,
                                 [&](double x) { return von_mises_density(x, params.mu1, params.kappa, params.mass); });
        case TargetKind::tracking: {
            const double mu = tracking_mean(t).value();
            return Field::sample(grid, [&](double x) { return von_mises_density(x, mu, params.kappa, params.mass); });
        }
    }
    throw InvalidArgument("unknown target kind");
}

Field target_density_rate(const TargetParams& params, const Grid& grid, double t) {
    validate(params);
    if (params.kind != TargetKind::tracking) return Field(grid);
    const double mu = tracking_mean(t).value();
    const double rate = tracking_mean_rate(t);
    // d/dt exp(kappa cos(x - mu(t))) = kappa sin(x - mu) mu'(t) exp(...)
    return Field::sample(grid, [&](double x) {
        return params.kappa * std::sin(x - mu) * rate * von_mises_density(x, mu, params.kappa, params.mass);
    });
}

Angle tracking_mean(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("tracking_mean: time must be finite and >= 0");
    if (t <= kRampStart) return Angle{};
    if (t <= kPeakTime) return wrap(t - kRampStart);
    if (t <= kTroughTime) return wrap(kPeak - (t - kPeakTime));
    if (t <= kEndTime) return wrap(-kPeak + (t - kTroughTime));
    return Angle{};
}

double tracking_mean_rate(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("tracking_mean_rate: time must be finite and >= 0");
    if (t < kRampStart) return 0.0;
    if (t < kPeakTime) return 1.0;
    if (t < kTroughTime) return -1.0;
    if (t < kEndTime) return 1.0;
    return 0.0;
}

}  // namespace swarmring
