#include "swarmring/control.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "swarmring/errors.hpp"

namespace swarmring {

double default_rho_floor(double agent_count) { return 1e-3 * agent_count / kTwoPi; }

void validate(const ControlGains& g) {
    if (!(std::isfinite(g.k_p) && g.k_p >= 0.0)) throw InvalidArgument("control gain K_p must be finite and >= 0");
    if (!(std::isfinite(g.rho_floor) && g.rho_floor >= 0.0)) throw InvalidArgument("rho_floor must be >= 0");
}

VelocityOperator::VelocityOperator(const Grid& grid, const InteractionParams& p)
    : params_(p), conv_(interaction_kernel_field(grid, p)) {}

Reference make_reference(const Field& rho_d, const Field& rho_d_rate, const VelocityOperator& velocity,
                         const ControlOptions& options) {
    Field v_d = velocity(rho_d);
    Field source = options.reference_feedforward ? reference_source(rho_d, v_d, rho_d_rate) : Field(rho_d.grid());
    return Reference{rho_d, std::move(v_d), std::move(source)};
}

Field velocity_field(const Field& rho, const InteractionParams& p) {
    return VelocityOperator(rho.grid(), p)(rho);
}

Field control_source(const Field& rho, const Field& rho_d, const Field& v, const Field& v_d,
                     const ControlGains& gains) {
    require_same_grid(rho, rho_d, "control_source");
    require_same_grid(rho, v, "control_source");
    require_same_grid(rho, v_d, "control_source");
    Field q = derivative(rho * v);
    q -= derivative(rho_d * v_d);
    q.add_scaled(rho_d, gains.k_p);
    q.add_scaled(rho, -gains.k_p);
    return q;
}

Field reference_source(const Field& rho_d, const Field& v_d, const Field& rho_d_rate) {
    require_same_grid(rho_d, rho_d_rate, "reference_source");
    Field s = derivative(rho_d * v_d);
    s += rho_d_rate;
    return s;
}

Field macroscopic_control(const Field& q, const Field& rho, const ControlGains& gains, const ControlOptions& options) {
    require_same_grid(q, rho, "macroscopic_control");
    Field u = cumulative_integral(q);
    const double boundary = options.boundary_term ? q[0] : 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        const double denom = std::max(rho[k], gains.rho_floor);
        u[k] = -(u[k] + boundary) / denom;
    }
    return u;
}

Field local_control_field(const Field& rho_hat, const Reference& ref, const VelocityOperator& velocity,
                          const ControlGains& gains, const ControlOptions& options) {
    Field clamped = rho_hat;
    for (double& v : clamped.values()) v = std::max(v, 0.0);
    const Field v_hat = velocity(clamped);
    Field q = control_source(clamped, ref.density, v_hat, ref.velocity, gains);
    if (options.reference_feedforward) q += ref.source;
    return macroscopic_control(q, clamped, gains, options);
}

Field centralized_control_field(const Field& rho, const Reference& ref, const VelocityOperator& velocity,
                                const ControlGains& gains, const ControlOptions& options) {
    return local_control_field(rho, ref, velocity, gains, options);
}

double sample_control(const Field& u, Angle xi) { return interp_periodic(u, xi); }

double seam_jump(const Field& u) { return std::abs(u[u.size() - 1] - u[0]); }

double fit_exponential_rate(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size()) throw InvalidArgument("fit_exponential_rate: length mismatch");
    double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(values[k] > 0.0)) continue;
        const double y = std::log(values[k]);
        n += 1;
        st += times[k];
        sy += y;
        stt += times[k] * times[k];
        sty += times[k] * y;
    }
    const double denom = n * stt - st * st;
    if (n < 2 || denom <= 0.0) throw InvalidArgument("fit_exponential_rate: need two positive samples at distinct times");
    return -(n * sty - st * sy) / denom;
}

ReferenceSchedule target_schedule(const TargetParams& target, const Grid& grid) {
    validate(target);
    if (target.kind != TargetKind::tracking) {
        auto fixed = std::make_shared<const std::pair<Field, Field>>(target_density(target, grid), Field(grid));
        return [fixed](double) { return *fixed; };
    }
    return [target, grid](double t) {
        return std::pair<Field, Field>(target_density_at(target, grid, t), target_density_rate(target, grid, t));
    };
}

MacroResult simulate_macroscopic(const Field& rho0, const ReferenceSchedule& reference, const MacroConfig& cfg) {
    validate(cfg.gains);
    if (!(cfg.dt > 0.0) || !(cfg.horizon >= 0.0)) throw InvalidArgument("simulate_macroscopic: need dt > 0, T >= 0");
    if (cfg.record_every == 0) throw InvalidArgument("simulate_macroscopic: record_every must be >= 1");

    const Grid& grid = rho0.grid();
    const VelocityOperator velocity(grid, cfg.interaction);

    const auto [rho_d0, rate0] = reference(0.0);
    require_same_grid(rho0, rho_d0, "simulate_macroscopic");
    const double target_mass = integrate(rho_d0);
    if (std::abs(integrate(rho0) - target_mass) > 1e-6 * std::abs(target_mass)) {
        throw InvalidArgument("simulate_macroscopic: initial mass " + std::to_string(integrate(rho0)) +
                              " does not match target mass " + std::to_string(target_mass));
    }
    const double vmax = std::max(velocity(rho0).max_abs(), velocity(rho_d0).max_abs());
    if (vmax > 0.0 && cfg.dt > 0.5 * grid.spacing() / vmax) {
        throw InvalidArgument("simulate_macroscopic: dt exceeds the advective bound 0.5 dx / max|V| = " +
                              std::to_string(0.5 * grid.spacing() / vmax));
    }

    auto rhs = [&](const Field& rho, double t) {
        const Field v = velocity(rho);
        Field drho = derivative(rho * v);
        drho *= -1.0;
        if (cfg.control_enabled) {
            const auto [rho_d, rate] = reference(t);
            const Reference ref = make_reference(rho_d, rate, velocity, cfg.options);
            drho += control_source(rho, ref.density, v, ref.velocity, cfg.gains);
            if (cfg.options.reference_feedforward) drho += ref.source;
        }
        return drho;
    };

    MacroResult out{{}, {}, {}, 0.0, rho0};
    auto record = [&](const Field& rho, double t) {
        out.times.push_back(t);
        out.error_norms.push_back(l2_norm(reference(t).first - rho));
        out.mass.push_back(integrate(rho));
    };

    const auto steps = static_cast<std::size_t>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
    Field rho = rho0;
    record(rho, 0.0);
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = static_cast<double>(n) * cfg.dt;
        const double h = cfg.dt;
        const Field k1 = rhs(rho, t);
        const Field k2 = rhs(Field(rho).add_scaled(k1, h / 2), t + h / 2);
        const Field k3 = rhs(Field(rho).add_scaled(k2, h / 2), t + h / 2);
        const Field k4 = rhs(Field(rho).add_scaled(k3, h), t + h);
        rho.add_scaled(k1, h / 6).add_scaled(k2, h / 3).add_scaled(k3, h / 3).add_scaled(k4, h / 6);
        if (!rho.all_finite()) throw IntegrationDiverged(n + 1, "non-finite macroscopic density");
        if ((n + 1) % cfg.record_every == 0 || n + 1 == steps) record(rho, static_cast<double>(n + 1) * cfg.dt);
    }

    out.final_density = rho;
    if (out.times.size() >= 2) {
        try {
            out.fitted_rate = fit_exponential_rate(out.times, out.error_norms);
        } catch (const InvalidArgument&) {
            out.fitted_rate = 0.0;
        }
    }
    return out;
}

}  // namespace swarmring
