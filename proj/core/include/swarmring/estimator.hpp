#pragma once

// PI dynamic-average-consensus density estimator.
//
//   d/dt rho_hat = -alpha (rho_hat - r) - sigma_p L rho_hat - sigma_i L w
//   d/dt w       = rho_hat
//
// applied pointwise on the grid, with one field pair (rho_hat_i, w_i) per
// agent. Estimates are not kept nonnegative here; consumers clamp.

#include <span>
#include <vector>

#include "swarmring/circle.hpp"
#include "swarmring/graph.hpp"
#include "swarmring/kernels.hpp"

namespace swarmring {

struct EstimatorGains {
    double alpha = 1.0;
    double sigma_p = 5.0;
    double sigma_i = 5.0;

    friend bool operator==(const EstimatorGains&, const EstimatorGains&) = default;
};

void validate(const EstimatorGains& g);

struct EstimatorState {
    std::vector<Field> estimates;       // rho_hat_i
    std::vector<Field> integral_terms;  // w_i, the running integral of rho_hat_i

    std::size_t agent_count() const noexcept { return estimates.size(); }
    bool all_finite() const noexcept;
};

/// Same layout as EstimatorState, holding time derivatives.
using EstimatorDerivative = EstimatorState;

/// rho_hat_i = N K_h(x - x_i), w_i = 0.
EstimatorState init_estimates(std::span<const Angle> positions, double agent_count, const SmoothingParams& p,
                              const Grid& grid);

EstimatorDerivative pi_rhs(const EstimatorState& state, std::span<const Field> refs, const CommGraph& g,
                           const EstimatorGains& gains);

/// ||mean_i rho_hat_i - mean_i r_i||_2; a diagnostic only.
double estimate_mean_consistency(const EstimatorState& state, std::span<const Field> refs);

/// Pointwise mean of a set of fields on one grid.
Field field_mean(std::span<const Field> fields);

}  // namespace swarmring
