#include "score_dag/dag.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "score_dag/error.hpp"
#include "score_dag/random.hpp"

namespace score_dag {

Dag::Dag(int d) : d_(d) {
    if (d < 0) {
        throw ConfigError("graph node count must be non-negative, got " + std::to_string(d));
    }
    adj_.assign(static_cast<std::size_t>(d) * static_cast<std::size_t>(d), 0);
}

Dag Dag::from_edges(int d, std::span<const std::pair<int, int>> edges) {
    Dag g(d);
    for (const auto& [from, to] : edges) {
        g.set_edge(from, to);
    }
    return g;
}

std::size_t Dag::index(int from, int to) const {
    if (from < 0 || to < 0 || from >= d_ || to >= d_) {
        throw DataError("edge (" + std::to_string(from) + ", " + std::to_string(to) +
                        ") out of range for a graph with " + std::to_string(d_) + " nodes");
    }
    return static_cast<std::size_t>(from) * static_cast<std::size_t>(d_) +
           static_cast<std::size_t>(to);
}

void Dag::set_edge(int from, int to, bool present) {
    const std::size_t idx = index(from, to);
    if (present && from == to) {
        throw DataError("self-loop on node " + std::to_string(from));
    }
    adj_[idx] = present ? 1 : 0;
}

std::size_t Dag::edge_count() const noexcept {
    return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1}));
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < d_; ++j) {
            if (has_edge(i, j)) out.emplace_back(i, j);
        }
    }
    return out;
}

std::vector<int> Dag::parents(int node) const {
    std::vector<int> out;
    for (int i = 0; i < d_; ++i) {
        if (has_edge(i, node)) out.push_back(i);
    }
    return out;
}

std::vector<int> Dag::children(int node) const {
    std::vector<int> out;
    for (int j = 0; j < d_; ++j) {
        if (has_edge(node, j)) out.push_back(j);
    }
    return out;
}

bool Dag::is_acyclic() const {
    try {
        (void)topological_sort(*this);
        return true;
    } catch (const CycleError&) {
        return false;
    }
}

bool Dag::contains(const Dag& other) const {
    if (other.d_ != d_) return false;
    for (std::size_t k = 0; k < adj_.size(); ++k) {
        if (other.adj_[k] && !adj_[k]) return false;
    }
    return true;
}

TopoOrder::TopoOrder(std::vector<int> nodes) : nodes_(std::move(nodes)) {
    std::vector<char> seen(nodes_.size(), 0);
    for (int v : nodes_) {
        if (v < 0 || static_cast<std::size_t>(v) >= nodes_.size() || seen[static_cast<std::size_t>(v)]) {
            throw DataError("order is not a permutation of 0.." + std::to_string(nodes_.size()) +
                            "-1 (offending entry " + std::to_string(v) + ")");
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

std::vector<int> TopoOrder::positions() const {
    std::vector<int> pos(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
        pos[static_cast<std::size_t>(nodes_[k])] = static_cast<int>(k);
    }
    return pos;
}

TopoOrder TopoOrder::reversed() const {
    return TopoOrder(std::vector<int>(nodes_.rbegin(), nodes_.rend()));
}

Dag sample_er_dag(int d, int expected_edges, std::uint64_t seed) {
    if (d < 1) throw ConfigError("ER graph needs d >= 1");
    if (expected_edges < 0) throw ConfigError("expected edge count must be non-negative");
    const double pairs = 0.5 * static_cast<double>(d) * static_cast<double>(d - 1);
    if (static_cast<double>(expected_edges) > pairs) {
        throw ConfigError("expected_edges=" + std::to_string(expected_edges) + " exceeds the " +
                          std::to_string(static_cast<long long>(pairs)) + " available pairs for d=" +
                          std::to_string(d));
    }
    Dag g(d);
    if (d == 1) return g;
    const double p = static_cast<double>(expected_edges) / pairs;

    Rng rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    // perm[a] precedes perm[b] whenever a < b.
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            if (uniform01(rng) < p) {
                g.set_edge(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
            }
        }
    }
    return g;
}

Dag sample_sf_dag(int d, int m, std::uint64_t seed) {
    if (d < 1) throw ConfigError("SF graph needs d >= 1");
    if (m < 1 || m >= d) {
        throw ConfigError("SF graph needs 1 <= m < d, got m=" + std::to_string(m) +
                          ", d=" + std::to_string(d));
    }
    Dag g(d);
    Rng rng(seed);
    std::vector<double> degree(static_cast<std::size_t>(d), 0.0);
    std::vector<int> candidates;
    std::vector<double> weights;
    for (int j = 1; j < d; ++j) {
        const int picks = std::min(m, j);
        candidates.resize(static_cast<std::size_t>(j));
        std::iota(candidates.begin(), candidates.end(), 0);
        for (int t = 0; t < picks; ++t) {
            weights.resize(candidates.size());
            double total = 0.0;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                weights[c] = degree[static_cast<std::size_t>(candidates[c])] + 1.0;
                total += weights[c];
            }
            double u = uniform01(rng) * total;
            std::size_t chosen = candidates.size() - 1;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (u < weights[c]) {
                    chosen = c;
                    break;
                }
                u -= weights[c];
            }
            const int target = candidates[chosen];
            g.set_edge(target, j);
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(chosen));
        }
        // Degrees update after all of j's picks so they are drawn from the same snapshot.
        for (int i = 0; i < j; ++i) {
            if (g.has_edge(i, j)) {
                degree[static_cast<std::size_t>(i)] += 1.0;
                degree[static_cast<std::size_t>(j)] += 1.0;
            }
        }
    }
    return g;
}

TopoOrder topological_sort(const Dag& g) {
    const int d = g.size();
    std::vector<int> indegree(static_cast<std::size_t>(d), 0);
    for (const auto& [from, to] : g.edges()) {
        (void)from;
        ++indegree[static_cast<std::size_t>(to)];
    }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < d; ++v) {
        if (indegree[static_cast<std::size_t>(v)] == 0) ready.push(v);
    }
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(d));
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        out.push_back(v);
        for (int c : g.children(v)) {
            if (--indegree[static_cast<std::size_t>(c)] == 0) ready.push(c);
        }
    }
    if (static_cast<int>(out.size()) != d) {
        // Every unvisited node has a remaining parent; walking parents must revisit a node.
        int v = 0;
        while (indegree[static_cast<std::size_t>(v)] == 0) ++v;
        std::vector<char> visited(static_cast<std::size_t>(d), 0);
        while (!visited[static_cast<std::size_t>(v)]) {
            visited[static_cast<std::size_t>(v)] = 1;
            for (int p : g.parents(v)) {
                if (indegree[static_cast<std::size_t>(p)] > 0) {
                    v = p;
                    break;
                }
            }
        }
        throw CycleError(v, "graph contains a cycle through node " + std::to_string(v));
    }
    return TopoOrder(std::move(out));
}

Dag full_dag_from_order(const TopoOrder& order) {
    const int d = order.size();
    Dag g(d);
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            g.set_edge(order[a], order[b]);
        }
    }
    return g;
}

}  // namespace score_dag
