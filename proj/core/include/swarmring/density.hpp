#pragma once

// Kernel density estimation, per-agent reference densities and the two
// normalized error metrics.

#include <span>
#include <vector>

#include "swarmring/circle.hpp"
#include "swarmring/kernels.hpp"

namespace swarmring {

/// A time series of raw L2 errors and its post-hoc normalization by the
/// series maximum.
struct ErrorSeries {
    std::vector<double> times;
    std::vector<double> raw;
    std::vector<double> normalized;
};

/// sum_i K_h(x - x_i). Throws on an empty position list.
Field kde(std::span<const Angle> positions, const SmoothingParams& p, const Grid& grid);

/// N * K_h(x - x_i): agent i's reference density.
Field reference_density(Angle xi, double agent_count, const SmoothingParams& p, const Grid& grid);

/// Reference densities for every agent, in agent order.
std::vector<Field> reference_densities(std::span<const Angle> positions, const SmoothingParams& p, const Grid& grid);

/// ||a - b||_2 by periodic quadrature. Throws on grid mismatch.
double l2_distance(const Field& a, const Field& b);

/// ||rho_d - rho||_2.
double density_error_raw(const Field& rho_d, const Field& rho);

/// ||rho - rho_hat_i||_2 for each agent i.
std::vector<double> estimation_error_raw(const Field& rho, std::span<const Field> estimates);

/// normalized[k] = raw[k] / max raw. An all-zero series stays all zero.
ErrorSeries normalize_series(ErrorSeries series);

/// Average estimation error: each agent's series is normalized by its own
/// maximum, then the normalized values are averaged over agents.
/// per_agent_raw[k][i] is agent i's raw error at sample k. The returned raw
/// column holds the agent-mean raw error.
ErrorSeries normalize_per_agent(std::vector<double> times, const std::vector<std::vector<double>>& per_agent_raw);

}  // namespace swarmring
