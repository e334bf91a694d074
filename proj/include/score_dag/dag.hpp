#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace score_dag {

/// Directed graph over nodes 0..d-1 stored as a dense adjacency matrix.
/// adj(i, j) == true means the edge i -> j. Self-loops are rejected; cycles
/// are representable (so readers can report them) but every generator in
/// this library produces acyclic graphs and consumers that need a DAG check.
class Dag {
public:
    Dag() = default;
    explicit Dag(int d);

    static Dag from_edges(int d, std::span<const std::pair<int, int>> edges);

    int size() const noexcept { return d_; }
    bool has_edge(int from, int to) const { return adj_[index(from, to)] != 0; }
    void set_edge(int from, int to, bool present = true);

    std::size_t edge_count() const noexcept;
    /// Edges in lexicographic (from, to) order.
    std::vector<std::pair<int, int>> edges() const;
    std::vector<int> parents(int node) const;
    std::vector<int> children(int node) const;

    bool is_acyclic() const;
    /// True when every edge of `other` is also an edge of this graph.
    bool contains(const Dag& other) const;

    bool operator==(const Dag&) const = default;

private:
    std::size_t index(int from, int to) const;

    int d_ = 0;
    std::vector<std::uint8_t> adj_;
};

/// A permutation of 0..d-1, earliest (most upstream) node first.
class TopoOrder {
public:
    TopoOrder() = default;
    /// Throws DataError unless `nodes` is a permutation of 0..size-1.
    explicit TopoOrder(std::vector<int> nodes);

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    int operator[](int pos) const { return nodes_[static_cast<std::size_t>(pos)]; }
    const std::vector<int>& nodes() const noexcept { return nodes_; }
    /// position()[v] is the index of node v within the order.
    std::vector<int> positions() const;
    TopoOrder reversed() const;

    bool operator==(const TopoOrder&) const = default;

private:
    std::vector<int> nodes_;
};

/// Erdos-Renyi DAG: a random permutation fixes the orientation and every
/// forward pair is kept independently with probability
/// expected_edges / (d(d-1)/2).
Dag sample_er_dag(int d, int expected_edges, std::uint64_t seed);

/// Barabasi-Albert DAG: node j attaches to min(m, j) distinct earlier nodes
/// drawn with probability proportional to (degree + 1); edges point
/// earlier -> later.
Dag sample_sf_dag(int d, int m, std::uint64_t seed);

/// Kahn's algorithm, smallest available node first. Throws CycleError.
TopoOrder topological_sort(const Dag& g);

/// Complete DAG implied by an order: i -> j iff i precedes j.
Dag full_dag_from_order(const TopoOrder& order);

}  // namespace score_dag
