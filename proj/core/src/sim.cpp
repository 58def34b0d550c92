#include "swarmring/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarmring/errors.hpp"
#include "swarmring/rk4.hpp"

namespace swarmring {

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw InvalidArgument(field + ": " + what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

struct NonFiniteState {};

struct CoupledState {
    SwarmState swarm;
    EstimatorState est;
};

CoupledState axpy(const CoupledState& y, double h, const CoupledDerivative& k) {
    CoupledState out = y;
    for (std::size_t i = 0; i < out.swarm.positions.size(); ++i) {
        const double x = y.swarm.positions[i].value() + h * k.positions[i];
        if (!std::isfinite(x)) throw NonFiniteState{};
        out.swarm.positions[i] = wrap(x);
    }
    out.swarm.t = y.swarm.t + h;
    for (std::size_t i = 0; i < k.estimator.estimates.size(); ++i) {
        out.est.estimates[i].add_scaled(k.estimator.estimates[i], h);
        out.est.integral_terms[i].add_scaled(k.estimator.integral_terms[i], h);
    }
    return out;
}

bool positions_finite(const SwarmState& s) {
    return std::all_of(s.positions.begin(), s.positions.end(), [](Angle a) { return std::isfinite(a.value()); });
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
    require(cfg.agents >= 1, "agents", "must be >= 1");
    require(cfg.grid_points >= 3, "grid_points", "must be >= 3");
    require(positive(cfg.dt), "dt", "must be > 0");
    require(std::isfinite(cfg.horizon) && cfg.horizon >= 0.0, "horizon", "must be >= 0");
    require(cfg.record_every >= 1, "record_every", "must be >= 1");
    require(positive(cfg.interaction.length_scale), "interaction.length_scale", "must be > 0");
    require(positive(cfg.smoothing.h), "smoothing.h", "must be > 0");
    require(positive(cfg.target.kappa), "target.kappa", "must be > 0");
    require(cfg.target.mass == static_cast<double>(cfg.agents), "target.mass", "must equal the agent count");
    require(std::isfinite(cfg.gains.k_p) && cfg.gains.k_p >= 0.0, "control.k_p", "must be >= 0");
    require(std::isfinite(cfg.gains.rho_floor) && cfg.gains.rho_floor >= 0.0, "control.rho_floor", "must be >= 0");
    const bool estimator = cfg.mode == ControlMode::decentralized || cfg.corun_estimator;
    if (estimator) {
        require(positive(cfg.estimator.alpha), "estimator.alpha", "must be > 0");
        require(positive(cfg.estimator.sigma_p), "estimator.sigma_p", "must be > 0");
        require(positive(cfg.estimator.sigma_i), "estimator.sigma_i", "must be > 0");
    }
    if (cfg.topology.kind == TopologyKind::knn && estimator) {
        require(cfg.topology.k >= 1 && cfg.topology.k + 1 <= cfg.agents, "topology.k", "must satisfy 1 <= k <= N-1");
    }
    if (cfg.topology.kind == TopologyKind::proximity) {
        require(std::isfinite(cfg.topology.eps) && cfg.topology.eps >= 0.0, "topology.eps", "must be >= 0");
    }
}

std::size_t step_count(const ScenarioConfig& cfg) {
    return static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
}

ScenarioConfig regulation_preset() { return ScenarioConfig{}; }

ScenarioConfig tracking_preset() {
    ScenarioConfig cfg;
    cfg.target.kind = TargetKind::tracking;
    cfg.target.mu1 = 0.0;
    cfg.target.mu2 = 0.0;
    cfg.target.kappa = 1.0;
    cfg.horizon = 8.0;
    return cfg;
}

ScenarioConfig proximity_preset() {
    ScenarioConfig cfg;
    cfg.topology = Topology{TopologyKind::proximity, 10, kPi / 4};
    return cfg;
}

std::vector<Angle> evenly_spaced(std::size_t n) {
    std::vector<Angle> x;
    x.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) {
        x.push_back(wrap(-kPi + static_cast<double>(2 * i - 1) * kPi / static_cast<double>(n)));
    }
    return x;
}

std::vector<double> agent_velocities(const SwarmState& state, std::span<const double> controls,
                                     const InteractionParams& p) {
    const std::size_t n = state.positions.size();
    if (controls.size() != n) {
        throw InvalidArgument("agent_velocities: " + std::to_string(controls.size()) + " controls for " +
                              std::to_string(n) + " agents");
    }
    std::vector<double> v(controls.begin(), controls.end());
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) s += interaction_kernel(wrapped_difference(state.positions[i], state.positions[j]), p);
        }
        v[i] += s;
    }
    return v;
}

ErrorSeries RunRecord::density_error() const { return normalize_series(ErrorSeries{times, density_error_raw, {}}); }

ErrorSeries RunRecord::estimation_error() const { return normalize_per_agent(times, estimation_error_raw); }

std::size_t RunRecord::disconnected_steps() const noexcept {
    return static_cast<std::size_t>(std::count(connected.begin(), connected.end(), std::uint8_t{0}));
}

double RunRecord::disconnected_fraction() const noexcept {
    return connected.empty() ? 0.0 : static_cast<double>(disconnected_steps()) / static_cast<double>(connected.size());
}

Simulator::Simulator(ScenarioConfig cfg)
    : Simulator(cfg, [&] {
          validate(cfg);
          return target_schedule(cfg.target, Grid(cfg.grid_points));
      }()) {}

Simulator::Simulator(ScenarioConfig cfg, ReferenceSchedule reference)
    : cfg_(std::move(cfg)),
      grid_((validate(cfg_), cfg_.grid_points)),
      velocity_(grid_, cfg_.interaction),
      reference_(std::move(reference)) {
    if (runs_estimator() && cfg_.topology.kind == TopologyKind::knn) {
        frozen_graph_ = knn_graph(evenly_spaced(cfg_.agents), cfg_.topology.k);
    }
}

bool Simulator::runs_estimator() const noexcept {
    return cfg_.mode == ControlMode::decentralized || cfg_.corun_estimator;
}

SwarmState Simulator::initial_swarm() const { return SwarmState{evenly_spaced(cfg_.agents), 0.0}; }

EstimatorState Simulator::initial_estimator(const SwarmState& swarm) const {
    if (!runs_estimator()) return {};
    return init_estimates(swarm.positions, static_cast<double>(cfg_.agents), cfg_.smoothing, grid_);
}

CommGraph Simulator::graph_for(const SwarmState& swarm) const {
    switch (cfg_.topology.kind) {
        case TopologyKind::knn:
            if (frozen_graph_) return *frozen_graph_;
            return CommGraph::complete(cfg_.agents);
        case TopologyKind::proximity:
            return proximity_graph(swarm.positions, cfg_.topology.eps);
        case TopologyKind::complete:
            return CommGraph::complete(cfg_.agents);
    }
    throw InvalidArgument("unknown topology kind");
}

Reference Simulator::reference_at(double t) const {
    auto [rho_d, rate] = reference_(t);
    return make_reference(rho_d, rate, velocity_, cfg_.control);
}

CoupledDerivative Simulator::coupled_rhs(const SwarmState& swarm, const EstimatorState& est,
                                         const CommGraph& g) const {
    const std::size_t n = swarm.positions.size();
    if (n != cfg_.agents) throw InvalidArgument("coupled_rhs: agent count does not match the configuration");
    const Reference ref = reference_at(swarm.t);

    CoupledDerivative d;
    d.controls.resize(n);

    if (runs_estimator()) {
        if (est.agent_count() != n) throw InvalidArgument("coupled_rhs: estimator state has the wrong agent count");
        const std::vector<Field> refs = reference_densities(swarm.positions, cfg_.smoothing, grid_);
        d.estimator = pi_rhs(est, refs, g, cfg_.estimator);
    }

    if (cfg_.mode == ControlMode::centralized) {
        const Field rho = kde(swarm.positions, cfg_.smoothing, grid_);
        const Field u = centralized_control_field(rho, ref, velocity_, cfg_.gains, cfg_.control);
        for (std::size_t i = 0; i < n; ++i) d.controls[i] = sample_control(u, swarm.positions[i]);
        d.seam_jump = seam_jump(u);
    } else {
        std::optional<Field> pinned;
        if (cfg_.pin_estimates_to_kde) pinned = kde(swarm.positions, cfg_.smoothing, grid_);
        for (std::size_t i = 0; i < n; ++i) {
            const Field& estimate = pinned ? *pinned : est.estimates[i];
            const Field u = local_control_field(estimate, ref, velocity_, cfg_.gains, cfg_.control);
            d.controls[i] = sample_control(u, swarm.positions[i]);
            d.seam_jump = std::max(d.seam_jump, seam_jump(u));
        }
    }

    d.positions = agent_velocities(swarm, d.controls, cfg_.interaction);
    return d;
}

std::pair<SwarmState, EstimatorState> Simulator::rk4_step(const SwarmState& swarm, const EstimatorState& est,
                                                          const CommGraph& g, double dt,
                                                          std::size_t step_index) const {
    if (!(dt > 0.0)) throw InvalidArgument("rk4_step: dt must be > 0");
    CoupledState next;
    try {
        next = rk4_advance(CoupledState{swarm, est}, dt,
                           [&](const CoupledState& s) { return coupled_rhs(s.swarm, s.est, g); }, axpy);
    } catch (const NonFiniteState&) {
        throw IntegrationDiverged(step_index, "non-finite agent position");
    }
    // Pin the clock to the step grid rather than accumulating stage offsets.
    next.swarm.t = swarm.t + dt;
    if (!positions_finite(next.swarm) || !next.est.all_finite()) {
        throw IntegrationDiverged(step_index, "non-finite agent or estimator state");
    }
    return {std::move(next.swarm), std::move(next.est)};
}

RunRecord Simulator::run() const {
    RunRecord rec;
    rec.config = cfg_;

    SwarmState swarm = initial_swarm();
    EstimatorState est = initial_estimator(swarm);
    const std::size_t steps = step_count(cfg_);

    auto target_mean_at = [&](double t) {
        return cfg_.target.kind == TargetKind::tracking ? tracking_mean(t).value() : cfg_.target.mu1;
    };

    auto record_sample = [&](const SwarmState& s, const EstimatorState& e, const CommGraph& g) {
        const Field rho = kde(s.positions, cfg_.smoothing, grid_);
        const Field rho_d = reference_(s.t).first;
        rec.times.push_back(s.t);
        rec.density_error_raw.push_back(density_error_raw(rho_d, rho));
        if (runs_estimator()) rec.estimation_error_raw.push_back(estimation_error_raw(rho, e.estimates));
        rec.target_mean.push_back(target_mean_at(s.t));
        std::vector<double> pos(s.positions.size());
        std::transform(s.positions.begin(), s.positions.end(), pos.begin(), [](Angle a) { return a.value(); });
        rec.positions.push_back(std::move(pos));
        const CoupledDerivative d = coupled_rhs(s, e, g);
        rec.controls.push_back(d.controls);
        rec.seam_jump.push_back(d.seam_jump);
    };

    auto take_snapshot = [&](const SwarmState& s, const EstimatorState& e) {
        Snapshot snap{s.t, kde(s.positions, cfg_.smoothing, grid_), reference_(s.t).first, {}, {}, {}};
        if (runs_estimator() && e.agent_count() > 0) {
            snap.estimate_mean = field_mean(e.estimates);
            Field lo = e.estimates.front();
            Field hi = e.estimates.front();
            for (const Field& f : e.estimates) {
                for (std::size_t k = 0; k < f.size(); ++k) {
                    lo[k] = std::min(lo[k], f[k]);
                    hi[k] = std::max(hi[k], f[k]);
                }
            }
            snap.estimate_min = std::move(lo);
            snap.estimate_max = std::move(hi);
        }
        rec.snapshots.push_back(std::move(snap));
    };

    // A zero horizon yields the initial snapshot and empty series.
    CommGraph g = graph_for(swarm);
    if (steps > 0) record_sample(swarm, est, g);
    take_snapshot(swarm, est);

    for (std::size_t n = 0; n < steps; ++n) {
        swarm.t = static_cast<double>(n) * cfg_.dt;
        g = graph_for(swarm);
        rec.step_times.push_back(swarm.t);
        rec.connected.push_back(is_connected(g) ? 1 : 0);

        std::tie(swarm, est) = rk4_step(swarm, est, g, cfg_.dt, n + 1);
        swarm.t = static_cast<double>(n + 1) * cfg_.dt;

        const bool last = n + 1 == steps;
        if ((n + 1) % cfg_.record_every == 0 || last) record_sample(swarm, est, graph_for(swarm));
        if (!last && cfg_.snapshot_every > 0 && (n + 1) % cfg_.snapshot_every == 0) take_snapshot(swarm, est);
        if (last) take_snapshot(swarm, est);
    }
    return rec;
}

RunRecord run_scenario(const ScenarioConfig& cfg) { return Simulator(cfg).run(); }

}  // namespace swarmring
