#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "swarmring/density.hpp"
#include "swarmring/errors.hpp"
#include "swarmring/sim.hpp"

using namespace swarmring;

namespace {

std::vector<Angle> random_positions(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::vector<Angle> x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(Angle::radians(u(rng)));
    return x;
}

}  // namespace

TEST(Kde, SingleAgentIsUnitKernel) {
    const Grid g(256);
    const SmoothingParams p{0.7};
    const std::vector<Angle> x{Angle::radians(0.0)};
    const Field rho = kde(x, p, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        EXPECT_NEAR(rho[k], von_mises_kernel(Angle::radians(g.point(k)), p), 1e-14);
    }
    EXPECT_NEAR(integrate(rho), 1.0, 1e-6);
}

TEST(Kde, EvenlySpacedIsNearlyConstant) {
    const Grid g(256);
    const Field rho = kde(evenly_spaced(50), SmoothingParams{0.7}, g);
    const double c = 50.0 / kTwoPi;
    for (double v : rho.values()) EXPECT_LT(std::abs(v - c) / c, 1e-3);
}

TEST(Kde, MatchesDirectKernelSum) {
    const Grid g(64);
    const SmoothingParams p{0.7};
    std::mt19937_64 rng(12);
    const auto x = random_positions(17, rng);
    const Field rho = kde(x, p, g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        double s = 0.0;
        for (Angle a : x) s += von_mises_kernel(wrap(g.point(k) - a.value()), p);
        EXPECT_NEAR(rho[k], s, 1e-12);
    }
}

TEST(Kde, TranslationByGridStepShiftsField) {
    const Grid g(128);
    const SmoothingParams p{0.7};
    std::mt19937_64 rng(13);
    const auto x = random_positions(20, rng);
    const std::size_t shift = 9;
    std::vector<Angle> moved;
    for (Angle a : x) moved.push_back(wrap(a.value() + shift * g.spacing()));
    const Field a = kde(x, p, g);
    const Field b = kde(moved, p, g);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(b[(k + shift) % g.size()], a[k], 1e-12);
}

TEST(Kde, MassIsNForRandomSets) {
    const Grid g(256);
    std::mt19937_64 rng(14);
    for (std::size_t n : {1u, 7u, 50u, 200u}) {
        for (int trial = 0; trial < 5; ++trial) {
            EXPECT_NEAR(integrate(kde(random_positions(n, rng), SmoothingParams{0.7}, g)), double(n), 1e-4);
        }
    }
}

TEST(Kde, EmptyPositionsThrow) {
    EXPECT_THROW(kde(std::vector<Angle>{}, SmoothingParams{}, Grid(16)), InvalidArgument);
}

TEST(ReferenceDensity, MeanEqualsKde) {
    const Grid g(256);
    const SmoothingParams p{0.7};
    std::mt19937_64 rng(15);
    const auto x = random_positions(50, rng);
    const auto refs = reference_densities(x, p, g);
    const Field rho = kde(x, p, g);
    Field mean(g);
    for (const Field& r : refs) mean += r;
    mean *= 1.0 / 50.0;
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(mean[k], rho[k], 1e-12 * std::max(1.0, rho[k]));
}

TEST(ReferenceDensity, MassAndPeak) {
    const Grid g(256);
    const Angle xi = Angle::radians(1.234);
    const Field r = reference_density(xi, 50.0, SmoothingParams{0.7}, g);
    EXPECT_NEAR(integrate(r), 50.0, 1e-4);
    const auto it = std::max_element(r.values().begin(), r.values().end());
    const std::size_t argmax = static_cast<std::size_t>(it - r.values().begin());
    const auto nearest = static_cast<std::size_t>(std::lround((xi.value() + kPi) / g.spacing())) % g.size();
    EXPECT_EQ(argmax, nearest);
}

TEST(DensityError, Examples) {
    const Grid g(128);
    std::mt19937_64 rng(16);
    const Field f = oracle::random_field(g, rng);
    EXPECT_EQ(density_error_raw(f, f), 0.0);
    EXPECT_NEAR(density_error_raw(Field::constant(g, 2.5), Field(g)), 2.5 * std::sqrt(kTwoPi), 1e-12);
}

TEST(DensityError, MatchesQuadratureOracle) {
    const Grid g(64);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 10; ++i) {
        const Field a = oracle::random_field(g, rng, 0, 10);
        const Field b = oracle::random_field(g, rng, 0, 10);
        EXPECT_NEAR(density_error_raw(a, b),
                    oracle::l2_distance(oracle::to_vector(a), oracle::to_vector(b), g.spacing()), 1e-12);
    }
}

TEST(DensityError, IsAMetricOnFields) {
    const Grid g(64);
    std::mt19937_64 rng(18);
    for (int i = 0; i < 50; ++i) {
        const Field a = oracle::random_field(g, rng);
        const Field b = oracle::random_field(g, rng);
        const Field c = oracle::random_field(g, rng);
        EXPECT_EQ(density_error_raw(a, b), density_error_raw(b, a));
        EXPECT_GT(density_error_raw(a, b), 0.0);
        EXPECT_LE(density_error_raw(a, c), density_error_raw(a, b) + density_error_raw(b, c) + 1e-10);
    }
}

TEST(EstimationError, Examples) {
    const Grid g(64);
    std::mt19937_64 rng(19);
    const Field rho = oracle::random_field(g, rng);
    std::vector<Field> est(3, rho);
    for (double e : estimation_error_raw(rho, est)) EXPECT_EQ(e, 0.0);
    est[1] += Field::constant(g, 0.5);
    const auto err = estimation_error_raw(rho, est);
    EXPECT_EQ(err[0], 0.0);
    EXPECT_NEAR(err[1], 0.5 * std::sqrt(kTwoPi), 1e-12);
    EXPECT_EQ(err[2], 0.0);
}

TEST(EstimationError, MatchesPerAgentOracle) {
    const Grid g(64);
    std::mt19937_64 rng(20);
    const Field rho = oracle::random_field(g, rng);
    const std::vector<Field> est{oracle::random_field(g, rng), oracle::random_field(g, rng),
                                 oracle::random_field(g, rng)};
    const auto err = estimation_error_raw(rho, est);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(err[i], oracle::l2_distance(oracle::to_vector(rho), oracle::to_vector(est[i]), g.spacing()),
                    1e-12);
    }
}

TEST(Normalize, Series) {
    const auto s = normalize_series(ErrorSeries{{0, 1, 2}, {2, 1, 0.5}, {}});
    EXPECT_EQ(s.normalized, (std::vector<double>{1, 0.5, 0.25}));
    const auto z = normalize_series(ErrorSeries{{0, 1}, {0, 0}, {}});
    EXPECT_EQ(z.normalized, (std::vector<double>{0, 0}));
}

TEST(Normalize, PerAgentNested) {
    const auto s = normalize_per_agent({0, 1}, {{2, 4}, {1, 1}});
    ASSERT_EQ(s.normalized.size(), 2u);
    EXPECT_DOUBLE_EQ(s.normalized[0], 1.0);
    EXPECT_DOUBLE_EQ(s.normalized[1], 0.375);
}

TEST(Normalize, ScaleInvariant) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 10);
    std::vector<double> raw(40), t(40);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        raw[i] = u(rng);
        t[i] = double(i);
    }
    const auto a = normalize_series(ErrorSeries{t, raw, {}});
    for (double c : {1e-3, 0.5, 7.0, 1e6}) {
        std::vector<double> scaled = raw;
        for (double& v : scaled) v *= c;
        const auto b = normalize_series(ErrorSeries{t, scaled, {}});
        for (std::size_t i = 0; i < raw.size(); ++i) EXPECT_NEAR(a.normalized[i], b.normalized[i], 1e-14);
    }
}
