#pragma once

// Coupled agent / estimator / controller simulation.
//
// Agents follow dx_i/dt = sum_j f({x_i, x_j}) + u_i. In centralized mode u_i
// samples one control field built from the kernel density estimate of the
// true positions; in decentralized mode agent i samples the field built from
// its own PI-consensus estimate. Everything is advanced together by one fixed
// RK4 step; the communication graph is frozen within a step.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "swarmring/circle.hpp"
#include "swarmring/control.hpp"
#include "swarmring/density.hpp"
#include "swarmring/estimator.hpp"
#include "swarmring/graph.hpp"
#include "swarmring/kernels.hpp"

namespace swarmring {

enum class ControlMode { centralized, decentralized };
enum class TopologyKind { knn, proximity, complete };

struct Topology {
    TopologyKind kind = TopologyKind::knn;
    std::size_t k = 10;     // knn
    double eps = kPi / 4;   // proximity radius

    friend bool operator==(const Topology&, const Topology&) = default;
};

struct ScenarioConfig {
    std::size_t agents = 50;
    ControlMode mode = ControlMode::decentralized;
    Topology topology;
    TargetParams target;
    ControlGains gains{1.0, default_rho_floor(50.0)};
    ControlOptions control;
    EstimatorGains estimator;
    bool corun_estimator = false;       // centralized: integrate the estimator for comparison only
    bool pin_estimates_to_kde = false;  // decentralized: agents use the true KDE instead of their estimate
    SmoothingParams smoothing;
    InteractionParams interaction;
    std::size_t grid_points = 256;
    double dt = 1e-3;
    double horizon = 5.0;
    std::size_t record_every = 10;
    std::size_t snapshot_every = 0;  // 0: initial and final snapshots only
    std::uint64_t seed = 0;          // reserved; the dynamics are deterministic

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws InvalidArgument naming the offending field.
void validate(const ScenarioConfig& cfg);

/// Number of integration steps, ceil(T / dt).
std::size_t step_count(const ScenarioConfig& cfg);

/// Bimodal regulation with the reference parameter set (N = 50, L = pi/4,
/// K_p = 1, 10-NN, alpha = 1, sigma_p = sigma_i = 5, h = 0.7, kappa = 2,
/// means -pi/2 and pi/2, T = 5).
ScenarioConfig regulation_preset();
/// Monomodal kappa = 1 target following tracking_mean, T = 8.
ScenarioConfig tracking_preset();
/// Regulation over the eps = pi/4 proximity network.
ScenarioConfig proximity_preset();

struct SwarmState {
    std::vector<Angle> positions;
    double t = 0.0;
};

/// x_i = -pi + (2i - 1) pi / N, i = 1..N.
std::vector<Angle> evenly_spaced(std::size_t n);

/// velocity_i = sum_j f(wrapped_difference(x_i, x_j)) + controls_i.
std::vector<double> agent_velocities(const SwarmState& state, std::span<const double> controls,
                                     const InteractionParams& p);

struct CoupledDerivative {
    std::vector<double> positions;  // dx_i/dt
    EstimatorDerivative estimator;  // empty when no estimator runs
    std::vector<double> controls;   // u_i used in dx_i/dt
    double seam_jump = 0.0;         // max over control fields of |U[M-1] - U[0]|
};

struct Snapshot {
    double t = 0.0;
    Field density;                         // KDE of true positions
    Field target;                          // rho_d(t)
    std::optional<Field> estimate_mean;    // present when an estimator runs
    std::optional<Field> estimate_min;
    std::optional<Field> estimate_max;
};

struct RunRecord {
    ScenarioConfig config;
    std::vector<double> times;
    std::vector<double> density_error_raw;
    std::vector<std::vector<double>> estimation_error_raw;  // [sample][agent]; empty without estimator
    std::vector<double> target_mean;                        // mean of rho_d (mu1, or tracking_mean(t))
    std::vector<std::vector<double>> positions;             // [sample][agent]
    std::vector<std::vector<double>> controls;              // [sample][agent]
    std::vector<double> seam_jump;
    std::vector<double> step_times;      // start time of each step
    std::vector<std::uint8_t> connected;  // graph connectivity per step
    std::vector<Snapshot> snapshots;

    bool has_estimator() const noexcept { return !estimation_error_raw.empty(); }
    ErrorSeries density_error() const;
    ErrorSeries estimation_error() const;
    std::size_t disconnected_steps() const noexcept;
    double disconnected_fraction() const noexcept;
};

/// Runtime context of one scenario: grid, operators, reference and topology
/// policy. Immutable after construction; const member functions are
/// thread-safe.
class Simulator {
public:
    explicit Simulator(ScenarioConfig cfg);
    /// Overrides the target-derived reference with an arbitrary schedule.
    Simulator(ScenarioConfig cfg, ReferenceSchedule reference);

    const ScenarioConfig& config() const noexcept { return cfg_; }
    const Grid& grid() const noexcept { return grid_; }
    const VelocityOperator& velocity() const noexcept { return velocity_; }
    const ReferenceSchedule& reference_schedule() const noexcept { return reference_; }

    SwarmState initial_swarm() const;
    /// Estimator state for the initial swarm; empty in centralized mode unless
    /// the estimator is co-run.
    EstimatorState initial_estimator(const SwarmState& swarm) const;
    bool runs_estimator() const noexcept;

    /// Graph for a step starting at `swarm`: knn frozen at t = 0 (complete when
    /// no estimator runs), proximity rebuilt from the current positions,
    /// complete otherwise.
    CommGraph graph_for(const SwarmState& swarm) const;

    Reference reference_at(double t) const;

    CoupledDerivative coupled_rhs(const SwarmState& swarm, const EstimatorState& est, const CommGraph& g) const;

    /// Classical RK4 on positions (+) estimates (+) integral terms with g held
    /// fixed; positions are re-wrapped. Throws IntegrationDiverged(step_index)
    /// on a non-finite result.
    std::pair<SwarmState, EstimatorState> rk4_step(const SwarmState& swarm, const EstimatorState& est,
                                                   const CommGraph& g, double dt, std::size_t step_index) const;

    RunRecord run() const;

private:
    ScenarioConfig cfg_;
    Grid grid_;
    VelocityOperator velocity_;
    ReferenceSchedule reference_;
    std::optional<CommGraph> frozen_graph_;
};

RunRecord run_scenario(const ScenarioConfig& cfg);

}  // namespace swarmring
