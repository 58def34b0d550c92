#include "swarmring/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <string>
#include <vector>

#include "swarmring/cli/output.hpp"
#include "swarmring/errors.hpp"

namespace swarmring::cli {

using nlohmann::json;

namespace {

constexpr double kTransientEnd = 0.5;

// Runs the jobs one after another, or each on its own thread.
template <class Result>
std::vector<Result> run_all(const std::vector<std::function<Result()>>& jobs, bool parallel) {
    std::vector<Result> out;
    out.reserve(jobs.size());
    if (!parallel) {
        for (const auto& job : jobs) out.push_back(job());
        return out;
    }
    std::vector<std::future<Result>> futures;
    futures.reserve(jobs.size());
    for (const auto& job : jobs) futures.push_back(std::async(std::launch::async, job));
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

struct TimedRun {
    RunRecord record;
    double seconds = 0.0;
};

TimedRun timed_run(const ScenarioConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunRecord r = run_scenario(cfg);
    return {std::move(r), std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
}

json with_timing(const TimedRun& run) {
    json j = run_summary(run.record);
    j["wall_seconds"] = run.seconds;
    return j;
}

// Centralized and decentralized runs with identical parameters.
json compare_modes(const RunConfig& cfg, const std::filesystem::path& out, bool parallel) {
    ScenarioConfig central = cfg.scenario;
    central.mode = ControlMode::centralized;
    ScenarioConfig decentral = cfg.scenario;
    decentral.mode = ControlMode::decentralized;

    const auto runs = run_all<TimedRun>({[&] { return timed_run(central); }, [&] { return timed_run(decentral); }},
                                        parallel);
    write_run_files(out / "centralized", runs[0].record);
    write_run_files(out / "decentralized", runs[1].record);

    json summary;
    summary["centralized"] = with_timing(runs[0]);
    summary["decentralized"] = with_timing(runs[1]);

    const ErrorSeries c = runs[0].record.density_error();
    const ErrorSeries d = runs[1].record.density_error();
    bool dominates = true;
    std::size_t compared = 0;
    for (std::size_t s = 0; s < c.times.size() && s < d.times.size(); ++s) {
        if (c.times[s] > kTransientEnd + 1e-12) break;
        ++compared;
        if (d.normalized[s] > c.normalized[s]) dominates = false;
    }
    summary["transient_window"] = {0.0, kTransientEnd};
    summary["transient_samples_compared"] = compared;
    summary["decentralized_le_centralized_in_transient"] = dominates;
    if (!c.times.empty() && !d.times.empty()) {
        const double a = c.normalized.back();
        const double b = d.normalized.back();
        const double scale = std::max(a, b);
        summary["final_normalized_gap"] = std::abs(a - b);
        summary["final_relative_gap"] = scale > 0.0 ? std::abs(a - b) / scale : 0.0;
    }
    return summary;
}

json cmd_proximity(const RunConfig& cfg, const std::filesystem::path& out) {
    ScenarioConfig s = cfg.scenario;
    s.mode = ControlMode::decentralized;
    const TimedRun run = timed_run(s);
    write_run_files(out, run.record);
    json summary = with_timing(run);
    summary["eps"] = s.topology.eps;
    if (!run.record.times.empty()) {
        const double from = std::max(0.0, s.horizon - 1.0);
        summary["steady_state_window_start"] = from;
        summary["steady_state_normalized_error"] = tail_mean(run.record.density_error(), from);
    }
    return summary;
}

json cmd_nn_sweep(const RunConfig& cfg, const std::filesystem::path& out, bool parallel) {
    std::vector<std::function<TimedRun()>> jobs;
    for (std::size_t k : cfg.sweep_k) {
        ScenarioConfig s = cfg.scenario;
        s.mode = ControlMode::decentralized;
        s.topology = Topology{TopologyKind::knn, k, s.topology.eps};
        jobs.emplace_back([s] { return timed_run(s); });
    }
    const auto runs = run_all<TimedRun>(jobs, parallel);

    json per_k = json::array();
    double previous = -std::numeric_limits<double>::infinity();
    bool non_increasing = true;
    bool first = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const std::size_t k = cfg.sweep_k[i];
        write_run_files(out / ("k_" + std::to_string(k)), runs[i].record);
        json entry = with_timing(runs[i]);
        entry["k"] = k;
        const auto half = time_to_half(runs[i].record.density_error());
        entry["time_to_half"] = half ? json(*half) : json(nullptr);
        per_k.push_back(entry);
        const double value = half.value_or(std::numeric_limits<double>::infinity());
        if (!first && value > previous) non_increasing = false;
        previous = value;
        first = false;
    }
    json summary;
    summary["runs"] = per_k;
    summary["time_to_half_non_increasing"] = non_increasing;
    return summary;
}

json cmd_macro_verify(const RunConfig& cfg, const std::filesystem::path& out) {
    const ScenarioConfig& s = cfg.scenario;
    const Grid grid(s.grid_points);
    const ReferenceSchedule schedule = target_schedule(s.target, grid);
    const Field target = schedule(0.0).first;
    const Field rho0 = cfg.macro_initial == MacroInitial::uniform
                           ? Field::constant(grid, static_cast<double>(s.agents) / kTwoPi)
                           : target;

    MacroConfig mc;
    mc.interaction = s.interaction;
    mc.gains = s.gains;
    mc.options = s.control;
    mc.dt = s.dt;
    mc.horizon = s.horizon;
    mc.record_every = s.record_every;
    mc.control_enabled = cfg.macro_control_enabled;

    const auto t0 = std::chrono::steady_clock::now();
    const MacroResult r = simulate_macroscopic(rho0, schedule, mc);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_macro_files(out, r, rho0, target);

    json summary;
    summary["k_p"] = s.gains.k_p;
    summary["fitted_rate"] = r.fitted_rate;
    summary["relative_rate_error"] = s.gains.k_p > 0.0 ? std::abs(r.fitted_rate - s.gains.k_p) / s.gains.k_p : 0.0;
    summary["initial_error"] = r.error_norms.front();
    summary["final_error"] = r.error_norms.back();
    summary["max_error"] = *std::max_element(r.error_norms.begin(), r.error_norms.end());
    double drift = 0.0;
    for (double m : r.mass) drift = std::max(drift, std::abs(m - r.mass.front()));
    summary["max_mass_drift"] = drift;
    summary["samples"] = r.times.size();
    summary["wall_seconds"] = seconds;
    return summary;
}

}  // namespace

std::optional<double> time_to_half(const ErrorSeries& e) {
    if (e.raw.empty()) return std::nullopt;
    const double half = 0.5 * e.raw.front();
    for (std::size_t s = 0; s < e.raw.size(); ++s) {
        if (e.raw[s] <= half) return e.times[s];
    }
    return std::nullopt;
}

double tail_mean(const ErrorSeries& e, double from) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t s = 0; s < e.times.size(); ++s) {
        if (e.times[s] >= from - 1e-12) {
            sum += e.normalized[s];
            ++n;
        }
    }
    if (n == 0) throw InvalidArgument("tail_mean: no samples at or after t = " + std::to_string(from));
    return sum / static_cast<double>(n);
}

json run_command(Command c, const RunConfig& cfg, const std::filesystem::path& out, bool parallel) {
    std::filesystem::create_directories(out);
    write_json(out / "config.json", to_json(cfg));

    json summary;
    switch (c) {
        case Command::regulate:
        case Command::track: summary = compare_modes(cfg, out, parallel); break;
        case Command::proximity: summary = cmd_proximity(cfg, out); break;
        case Command::nn_sweep: summary = cmd_nn_sweep(cfg, out, parallel); break;
        case Command::macro_verify: summary = cmd_macro_verify(cfg, out); break;
    }
    summary["command"] = command_name(c);
    write_json(out / "summary.json", summary);
    return summary;
}

}  // namespace swarmring::cli
