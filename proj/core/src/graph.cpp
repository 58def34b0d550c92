#include "swarmring/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "swarmring/errors.hpp"

namespace swarmring {

namespace {

constexpr double kTieTolerance = 1e-12;

double circular_distance(Angle a, Angle b) { return std::abs(wrapped_difference(a, b).value()); }

}  // namespace

CommGraph::CommGraph(std::size_t n) : n_(n), adjacency_(n * n, 0), neighbors_(n) {}

CommGraph::CommGraph(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges) : CommGraph(n) {
    for (auto [i, j] : edges) add_edge(i, j);
}

CommGraph CommGraph::complete(std::size_t n) {
    CommGraph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
    return g;
}

std::size_t CommGraph::edge_count() const noexcept {
    std::size_t twice = 0;
    for (const auto& nb : neighbors_) twice += nb.size();
    return twice / 2;
}

void CommGraph::add_edge(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_) throw InvalidArgument("CommGraph: vertex index out of range");
    if (i == j) throw InvalidArgument("CommGraph: self-loops are not allowed");
    if (adjacent(i, j)) return;
    adjacency_[i * n_ + j] = 1;
    adjacency_[j * n_ + i] = 1;
    neighbors_[i].insert(std::lower_bound(neighbors_[i].begin(), neighbors_[i].end(), j), j);
    neighbors_[j].insert(std::lower_bound(neighbors_[j].begin(), neighbors_[j].end(), i), i);
}

std::vector<std::vector<int>> CommGraph::adjacency_matrix() const {
    std::vector<std::vector<int>> a(n_, std::vector<int>(n_, 0));
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j : neighbors_[i]) a[i][j] = 1;
    return a;
}

std::vector<double> CommGraph::laplacian() const {
    std::vector<double> l(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        l[i * n_ + i] = static_cast<double>(degree(i));
        for (std::size_t j : neighbors_[i]) l[i * n_ + j] = -1.0;
    }
    return l;
}

CommGraph knn_graph(std::span<const Angle> positions, std::size_t k) {
    const std::size_t n = positions.size();
    if (n < 2 || k < 1 || k > n - 1) {
        throw InvalidArgument("knn_graph: k must satisfy 1 <= k <= N-1 (k=" + std::to_string(k) +
                              ", N=" + std::to_string(n) + ")");
    }
    CommGraph g(n);
    std::vector<std::size_t> order;
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        order.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dist[j] = circular_distance(positions[i], positions[j]);
            order.push_back(j);
        }
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
        });
        // Runs of distances within the tie tolerance are reordered by index.
        for (auto first = order.begin(); first != order.end();) {
            auto last = std::find_if(first, order.end(),
                                     [&](std::size_t j) { return dist[j] - dist[*first] > kTieTolerance; });
            std::sort(first, last);
            first = last;
        }
        for (std::size_t r = 0; r < k; ++r) g.add_edge(i, order[r]);
    }
    return g;
}

CommGraph proximity_graph(std::span<const Angle> positions, double eps) {
    if (!(eps >= 0.0)) throw InvalidArgument("proximity_graph: eps must be >= 0");
    const std::size_t n = positions.size();
    CommGraph g(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (circular_distance(positions[i], positions[j]) <= eps) g.add_edge(i, j);
    return g;
}

std::vector<Field> laplacian_apply(const CommGraph& g, std::span<const Field> states) {
    if (states.size() != g.size()) {
        throw InvalidArgument("laplacian_apply: expected " + std::to_string(g.size()) + " states, got " +
                              std::to_string(states.size()));
    }
    std::vector<Field> out;
    out.reserve(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i > 0) require_same_grid(states[0], states[i], "laplacian_apply");
        Field acc(states[i].grid());
        for (std::size_t j : g.neighbors(i)) acc += states[i] - states[j];
        out.push_back(std::move(acc));
    }
    return out;
}

std::vector<double> laplacian_apply(const CommGraph& g, std::span<const double> states) {
    if (states.size() != g.size()) throw InvalidArgument("laplacian_apply: dimension mismatch");
    std::vector<double> out(states.size(), 0.0);
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j : g.neighbors(i)) out[i] += states[i] - states[j];
    return out;
}

bool is_connected(const CommGraph& g) {
    const std::size_t n = g.size();
    if (n <= 1) return true;
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t v = frontier.front();
        frontier.pop();
        for (std::size_t w : g.neighbors(v)) {
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                frontier.push(w);
            }
        }
    }
    return reached == n;
}

}  // namespace swarmring
