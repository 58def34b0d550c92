#pragma once

// Continuification control on the circle.
//
// The macroscopic model is rho_t + [rho V]_x = q with V = f * rho. The source
//   q = K_p (rho_d - rho) + [rho V]_x - [rho_d V_d]_x
// drives e = rho_d - rho as e_t = -K_p e whenever rho_d obeys
// rho_d_t + [rho_d V_d]_x = 0. A prescribed target generally does not, so the
// pipeline can add the reference source s_d = rho_d_t + [rho_d V_d]_x to q
// (ControlOptions::reference_feedforward). The velocity field U is recovered
// from q by spatial integration and divided by the (floored) density.

#include <cstddef>
#include <functional>
#include <vector>

#include "swarmring/circle.hpp"
#include "swarmring/kernels.hpp"

namespace swarmring {

struct ControlGains {
    double k_p = 1.0;
    double rho_floor = 0.0;  // density floor used in the division for U

    friend bool operator==(const ControlGains&, const ControlGains&) = default;
};

struct ControlOptions {
    /// Keep the additive q(-pi) term in the recovery of U.
    bool boundary_term = true;
    /// Add the reference source rho_d_t + [rho_d V_d]_x to q.
    bool reference_feedforward = true;

    friend bool operator==(const ControlOptions&, const ControlOptions&) = default;
};

/// Default density floor 1e-3 * N / (2 pi).
double default_rho_floor(double agent_count);

void validate(const ControlGains& g);

/// V = f * rho for a fixed interaction kernel; caches the kernel spectrum.
class VelocityOperator {
public:
    VelocityOperator(const Grid& grid, const InteractionParams& p);

    Field operator()(const Field& rho) const { return conv_.apply(rho); }
    const Grid& grid() const noexcept { return conv_.grid(); }
    const InteractionParams& params() const noexcept { return params_; }

private:
    InteractionParams params_;
    CircularConvolver conv_;
};

/// Desired density with its velocity field and reference source, everything
/// the agents treat as globally known.
struct Reference {
    Field density;   // rho_d
    Field velocity;  // V_d = f * rho_d
    Field source;    // rho_d_t + [rho_d V_d]_x, or zero when feedforward is off
};

Reference make_reference(const Field& rho_d, const Field& rho_d_rate, const VelocityOperator& velocity,
                         const ControlOptions& options);

/// Circular convolution of the sampled interaction kernel with rho.
Field velocity_field(const Field& rho, const InteractionParams& p);

/// K_p (rho_d - rho) + [rho V]_x - [rho_d V_d]_x.
Field control_source(const Field& rho, const Field& rho_d, const Field& v, const Field& v_d, const ControlGains& gains);

/// rho_d_t + [rho_d V_d]_x.
Field reference_source(const Field& rho_d, const Field& v_d, const Field& rho_d_rate);

/// U[k] = -(Q[k] + q[0]) / max(rho[k], rho_floor), Q = cumulative_integral(q).
/// The q[0] addend is dropped when options.boundary_term is false.
Field macroscopic_control(const Field& q, const Field& rho, const ControlGains& gains,
                          const ControlOptions& options = {});

/// One agent's control field from its own estimate: the estimate is clamped
/// at 0 for the source and flux terms, and floored in the division.
Field local_control_field(const Field& rho_hat, const Reference& ref, const VelocityOperator& velocity,
                          const ControlGains& gains, const ControlOptions& options = {});

/// Control field from the true (kernel-estimated) density. Same pipeline as
/// local_control_field.
Field centralized_control_field(const Field& rho, const Reference& ref, const VelocityOperator& velocity,
                                const ControlGains& gains, const ControlOptions& options = {});

/// u_i = U(x_i) by periodic linear interpolation.
double sample_control(const Field& u, Angle xi);

/// |U[M-1] - U[0]|: the jump of U across the seam between the last and first
/// grid nodes.
double seam_jump(const Field& u);

/// Least-squares decay rate -d/dt log(values) over samples with value > 0.
double fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values);

/// rho_d(t) and its time derivative.
using ReferenceSchedule = std::function<std::pair<Field, Field>(double t)>;

ReferenceSchedule target_schedule(const TargetParams& target, const Grid& grid);

struct MacroConfig {
    InteractionParams interaction;
    ControlGains gains;
    ControlOptions options;
    double dt = 1e-3;
    double horizon = 5.0;
    std::size_t record_every = 10;
    bool control_enabled = true;  // false integrates the open-loop rho_t = -[rho V]_x
};

struct MacroResult {
    std::vector<double> times;
    std::vector<double> error_norms;  // ||rho_d(t) - rho(t)||_2
    std::vector<double> mass;         // integral of rho(t)
    double fitted_rate = 0.0;
    Field final_density;
};

/// RK4 in time, central differences in space. Throws InvalidArgument on a mass
/// mismatch larger than 1e-6 N or a step violating dt <= 0.5 dx / max|V|, and
/// IntegrationDiverged on a non-finite density.
MacroResult simulate_macroscopic(const Field& rho0, const ReferenceSchedule& reference, const MacroConfig& cfg);

}  // namespace swarmring
