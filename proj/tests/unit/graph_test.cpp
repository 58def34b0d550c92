#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "oracles.hpp"
#include "swarmring/errors.hpp"
#include "swarmring/graph.hpp"
#include "swarmring/sim.hpp"

using namespace swarmring;

namespace {

std::vector<Angle> random_positions(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::vector<Angle> x;
    for (std::size_t i = 0; i < n; ++i) x.push_back(Angle::radians(u(rng)));
    return x;
}

std::vector<double> values(const std::vector<Angle>& x) {
    std::vector<double> v;
    for (Angle a : x) v.push_back(a.value());
    return v;
}

std::set<std::pair<std::size_t, std::size_t>> edges_of(const CommGraph& g) {
    std::set<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j : g.neighbors(i))
            if (i < j) e.emplace(i, j);
    return e;
}

Eigen::MatrixXd laplacian_matrix(const CommGraph& g) {
    const auto flat = g.laplacian();
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd l(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) l(i, j) = flat[static_cast<std::size_t>(i * n + j)];
    return l;
}

double fiedler_value(const CommGraph& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian_matrix(g));
    return es.eigenvalues()(1);
}

void check_structure(const CommGraph& g, std::mt19937_64& rng) {
    const auto n = g.size();
    const auto l = g.laplacian();
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_FALSE(g.adjacent(i, i));
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            EXPECT_EQ(g.adjacent(i, j), g.adjacent(j, i));
            row += l[i * n + j];
        }
        EXPECT_EQ(row, 0.0);
    }
    std::normal_distribution<double> nd;
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (auto& v : x) v = nd(rng);
    EXPECT_GE(x.dot(laplacian_matrix(g) * x), -1e-10);
}

}  // namespace

TEST(Knn, FullKIsComplete) {
    std::mt19937_64 rng(1);
    const auto x = random_positions(12, rng);
    const CommGraph g = knn_graph(x, 11);
    EXPECT_EQ(g, CommGraph::complete(12));
    for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(g.degree(i), 11u);
}

TEST(Knn, FourEvenlySpacedTwoNeighboursMatchesBruteForce) {
    const auto x = evenly_spaced(4);
    const CommGraph g = knn_graph(x, 2);
    EXPECT_EQ(edges_of(g), oracle::knn_edges(values(x), 2));
    // Each agent's two nearest are its ring neighbours: a 4-cycle.
    EXPECT_EQ(g.edge_count(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(g.degree(i), 2u);
}

TEST(Knn, EvenlySpacedTenNeighboursIsConnected) {
    const CommGraph g = knn_graph(evenly_spaced(50), 10);
    EXPECT_TRUE(is_connected(g));
    EXPECT_GT(fiedler_value(g), 1e-8);
}

TEST(Knn, MatchesBruteForceOnRandomSets) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = random_positions(25, rng);
        for (std::size_t k : {1u, 3u, 10u}) {
            const CommGraph g = knn_graph(x, k);
            EXPECT_EQ(edges_of(g), oracle::knn_edges(values(x), k));
            for (std::size_t i = 0; i < g.size(); ++i) EXPECT_GE(g.degree(i), k);
            check_structure(g, rng);
        }
    }
}

TEST(Knn, RejectsBadK) {
    const auto x = evenly_spaced(5);
    EXPECT_THROW(knn_graph(x, 0), InvalidArgument);
    EXPECT_THROW(knn_graph(x, 5), InvalidArgument);
}

TEST(Proximity, LargeRadiusIsComplete) {
    std::mt19937_64 rng(3);
    const auto x = random_positions(15, rng);
    EXPECT_EQ(proximity_graph(x, kPi), CommGraph::complete(15));
    EXPECT_EQ(proximity_graph(x, 10.0), CommGraph::complete(15));
}

TEST(Proximity, OppositeAgentsUnlinked) {
    const std::vector<Angle> x{Angle::radians(-kPi / 2), Angle::radians(kPi / 2)};
    EXPECT_EQ(proximity_graph(x, kPi / 4).edge_count(), 0u);
}

TEST(Proximity, EvenlySpacedDegreeTwelve) {
    const auto x = evenly_spaced(50);
    const CommGraph g = proximity_graph(x, kPi / 4);
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_EQ(g.degree(i), 12u);
        std::size_t brute = 0;
        for (std::size_t j = 0; j < 50; ++j)
            if (j != i && std::abs(oracle::wrap_by_shifting(x[i].value() - x[j].value())) <= kPi / 4) ++brute;
        EXPECT_EQ(brute, 12u);
    }
}

TEST(Proximity, RotationInvariant) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_positions(30, rng);
        const double r = u(rng);
        std::vector<Angle> y;
        for (Angle a : x) y.push_back(wrap(a.value() + r));
        EXPECT_EQ(proximity_graph(x, 0.5), proximity_graph(y, 0.5));
    }
}

TEST(Proximity, StructureOnRandomSets) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) check_structure(proximity_graph(random_positions(20, rng), 0.7), rng);
}

TEST(Laplacian, ConsensusNullSpace) {
    const CommGraph g = knn_graph(evenly_spaced(10), 3);
    const Grid grid(32);
    std::mt19937_64 rng(6);
    const std::vector<Field> same(10, oracle::random_field(grid, rng));
    for (const Field& f : laplacian_apply(g, same)) EXPECT_EQ(f.max_abs(), 0.0);
}

TEST(Laplacian, CompleteK3) {
    const std::vector<double> s{1, 2, 3};
    EXPECT_EQ(laplacian_apply(CommGraph::complete(3), s), (std::vector<double>{-3, 0, 3}));
}

TEST(Laplacian, OutputsSumToZero) {
    std::mt19937_64 rng(7);
    const CommGraph g = knn_graph(random_positions(20, rng), 4);
    const Grid grid(32);
    std::vector<Field> states;
    for (int i = 0; i < 20; ++i) states.push_back(oracle::random_field(grid, rng));
    Field sum(grid);
    for (const Field& f : laplacian_apply(g, states)) sum += f;
    EXPECT_LT(sum.max_abs(), 1e-12);
}

TEST(Laplacian, MatchesDenseMatrix) {
    std::mt19937_64 rng(8);
    const CommGraph g = proximity_graph(random_positions(15, rng), 1.0);
    std::normal_distribution<double> nd;
    std::vector<double> s(15);
    Eigen::VectorXd v(15);
    for (int i = 0; i < 15; ++i) v(i) = s[i] = nd(rng);
    const Eigen::VectorXd want = laplacian_matrix(g) * v;
    const auto got = laplacian_apply(g, s);
    for (int i = 0; i < 15; ++i) EXPECT_NEAR(got[i], want(i), 1e-12);
}

TEST(Connectivity, Cases) {
    EXPECT_TRUE(is_connected(CommGraph::complete(6)));
    EXPECT_FALSE(is_connected(CommGraph(4)));
    const std::vector<std::pair<std::size_t, std::size_t>> triangles{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    const CommGraph g(6, triangles);
    EXPECT_FALSE(is_connected(g));
    EXPECT_NEAR(fiedler_value(g), 0.0, 1e-12);
}

TEST(Connectivity, AgreesWithFiedlerValue) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        const CommGraph g = proximity_graph(random_positions(12, rng), 0.6);
        EXPECT_EQ(is_connected(g), fiedler_value(g) > 1e-9);
    }
}

TEST(CommGraph, RejectsBadEdges) {
    CommGraph g(3);
    EXPECT_THROW(g.add_edge(1, 1), InvalidArgument);
    EXPECT_THROW(g.add_edge(0, 3), InvalidArgument);
}
