#include <benchmark/benchmark.h>

#include <random>

#include "swarmring/control.hpp"
#include "swarmring/density.hpp"
#include "swarmring/estimator.hpp"
#include "swarmring/sim.hpp"

using namespace swarmring;

namespace {

Field random_field(const Grid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<double> v(g.size());
    for (double& x : v) x = u(rng);
    return Field(g, std::move(v));
}

void BM_Convolution(benchmark::State& state) {
    const Grid g(static_cast<std::size_t>(state.range(0)));
    const CircularConvolver conv(interaction_kernel_field(g, InteractionParams{}));
    const Field f = random_field(g, 1);
    for (auto _ : state) benchmark::DoNotOptimize(conv.apply(f));
}
BENCHMARK(BM_Convolution)->Arg(128)->Arg(256)->Arg(1024);

void BM_Kde(benchmark::State& state) {
    const Grid g(256);
    const auto x = evenly_spaced(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kde(x, SmoothingParams{}, g));
}
BENCHMARK(BM_Kde)->Arg(50)->Arg(200);

void BM_LocalControl(benchmark::State& state) {
    const Grid g(256);
    const VelocityOperator vel(g, InteractionParams{});
    const Reference ref = make_reference(target_density(TargetParams{}, g), Field(g), vel, ControlOptions{});
    const Field est = random_field(g, 2);
    const ControlGains gains{1.0, default_rho_floor(50)};
    for (auto _ : state) benchmark::DoNotOptimize(local_control_field(est, ref, vel, gains));
}
BENCHMARK(BM_LocalControl);

void BM_PiRhs(benchmark::State& state) {
    const Grid g(256);
    const auto x = evenly_spaced(50);
    const auto refs = reference_densities(x, SmoothingParams{}, g);
    const EstimatorState s = init_estimates(x, 50.0, SmoothingParams{}, g);
    const CommGraph graph = knn_graph(x, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(pi_rhs(s, refs, graph, EstimatorGains{}));
}
BENCHMARK(BM_PiRhs)->Arg(5)->Arg(10)->Arg(20);

void BM_CoupledStep(benchmark::State& state) {
    ScenarioConfig cfg = regulation_preset();
    cfg.mode = state.range(0) ? ControlMode::decentralized : ControlMode::centralized;
    const Simulator sim(cfg);
    const SwarmState s0 = sim.initial_swarm();
    const EstimatorState e0 = sim.initial_estimator(s0);
    const CommGraph graph = sim.graph_for(s0);
    for (auto _ : state) benchmark::DoNotOptimize(sim.rk4_step(s0, e0, graph, cfg.dt, 1));
}
BENCHMARK(BM_CoupledStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
