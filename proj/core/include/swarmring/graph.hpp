#pragma once

// Undirected communication topologies and their Laplacians.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "swarmring/circle.hpp"

namespace swarmring {

/// Undirected simple graph on N agents, stored as a dense 0/1 adjacency plus
/// sorted neighbor lists. The Laplacian is D - A.
class CommGraph {
public:
    explicit CommGraph(std::size_t n = 0);
    CommGraph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges);

    static CommGraph complete(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    bool adjacent(std::size_t i, std::size_t j) const noexcept { return adjacency_[i * n_ + j] != 0; }
    std::size_t degree(std::size_t i) const noexcept { return neighbors_[i].size(); }
    std::span<const std::size_t> neighbors(std::size_t i) const noexcept { return neighbors_[i]; }
    std::size_t edge_count() const noexcept;

    /// Adds the undirected edge {i, j}; self-loops are rejected.
    void add_edge(std::size_t i, std::size_t j);

    /// Dense row-major N x N adjacency (0/1).
    std::vector<std::vector<int>> adjacency_matrix() const;

    /// Dense row-major N x N Laplacian D - A.
    std::vector<double> laplacian() const;

    friend bool operator==(const CommGraph& a, const CommGraph& b) { return a.n_ == b.n_ && a.adjacency_ == b.adjacency_; }

private:
    std::size_t n_;
    std::vector<std::uint8_t> adjacency_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

/// Each agent selects its k nearest agents by wrapped circular distance
/// (ties, within 1e-12 rad, go to the lower index); edges are the union of
/// all selections. Requires 1 <= k <= N - 1.
CommGraph knn_graph(std::span<const Angle> positions, std::size_t k);

/// Edge {i, j} iff |wrapped_difference(x_i, x_j)| <= eps. Requires eps >= 0.
CommGraph proximity_graph(std::span<const Angle> positions, double eps);

/// out_i = sum_{j in N(i)} (states_i - states_j), pointwise.
std::vector<Field> laplacian_apply(const CommGraph& g, std::span<const Field> states);

/// Scalar-state form of laplacian_apply.
std::vector<double> laplacian_apply(const CommGraph& g, std::span<const double> states);

/// True iff a breadth-first search from vertex 0 reaches every vertex.
bool is_connected(const CommGraph& g);

}  // namespace swarmring
