#include "swarmring/density.hpp"

#include <algorithm>
#include <cmath>

#include "swarmring/errors.hpp"

namespace swarmring {

namespace {

// K_h(x_k - xi) for all grid nodes, via cos(a - b) = cos a cos b + sin a sin b.
void accumulate_kernel(std::span<double> out, Angle xi, double weight, const SmoothingParams& p, const Grid& grid) {
    const double kappa = 1.0 / (p.h * p.h);
    const double norm = weight / (kTwoPi * bessel_i0(kappa));
    const double c = std::cos(xi.value());
    const double s = std::sin(xi.value());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double x = grid.point(k);
        out[k] += norm * std::exp(kappa * (std::cos(x) * c + std::sin(x) * s));
    }
}

}  // namespace

Field kde(std::span<const Angle> positions, const SmoothingParams& p, const Grid& grid) {
    if (positions.empty()) throw InvalidArgument("kde: at least one position is required");
    validate(p);
    Field out(grid);
    for (Angle xi : positions) accumulate_kernel(out.values(), xi, 1.0, p, grid);
    return out;
}

Field reference_density(Angle xi, double agent_count, const SmoothingParams& p, const Grid& grid) {
    validate(p);
    Field out(grid);
    accumulate_kernel(out.values(), xi, agent_count, p, grid);
    return out;
}

std::vector<Field> reference_densities(std::span<const Angle> positions, const SmoothingParams& p, const Grid& grid) {
    std::vector<Field> refs;
    refs.reserve(positions.size());
    const auto n = static_cast<double>(positions.size());
    for (Angle xi : positions) refs.push_back(reference_density(xi, n, p, grid));
    return refs;
}

double l2_distance(const Field& a, const Field& b) {
    require_same_grid(a, b, "l2_distance");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s * a.grid().spacing());
}

double density_error_raw(const Field& rho_d, const Field& rho) { return l2_distance(rho_d, rho); }

std::vector<double> estimation_error_raw(const Field& rho, std::span<const Field> estimates) {
    std::vector<double> out;
    out.reserve(estimates.size());
    for (const Field& e : estimates) out.push_back(l2_distance(rho, e));
    return out;
}

ErrorSeries normalize_series(ErrorSeries series) {
    const double peak = series.raw.empty() ? 0.0 : *std::max_element(series.raw.begin(), series.raw.end());
    series.normalized.assign(series.raw.size(), 0.0);
    if (peak > 0.0) {
        for (std::size_t k = 0; k < series.raw.size(); ++k) series.normalized[k] = series.raw[k] / peak;
    }
    return series;
}

ErrorSeries normalize_per_agent(std::vector<double> times, const std::vector<std::vector<double>>& per_agent_raw) {
    ErrorSeries out;
    out.times = std::move(times);
    const std::size_t samples = per_agent_raw.size();
    out.raw.assign(samples, 0.0);
    out.normalized.assign(samples, 0.0);
    if (samples == 0) return out;

    const std::size_t agents = per_agent_raw.front().size();
    for (const auto& row : per_agent_raw) {
        if (row.size() != agents) throw InvalidArgument("normalize_per_agent: ragged per-agent series");
    }
    if (agents == 0) return out;

    std::vector<double> peak(agents, 0.0);
    for (const auto& row : per_agent_raw) {
        for (std::size_t i = 0; i < agents; ++i) peak[i] = std::max(peak[i], row[i]);
    }
    const double inv_n = 1.0 / static_cast<double>(agents);
    for (std::size_t k = 0; k < samples; ++k) {
        double raw_sum = 0.0;
        double norm_sum = 0.0;
        for (std::size_t i = 0; i < agents; ++i) {
            raw_sum += per_agent_raw[k][i];
            if (peak[i] > 0.0) norm_sum += per_agent_raw[k][i] / peak[i];
        }
        out.raw[k] = raw_sum * inv_n;
        out.normalized[k] = norm_sum * inv_n;
    }
    return out;
}

}  // namespace swarmring
