#include "score_dag/metrics.hpp"

#include <string>

#include "score_dag/error.hpp"

namespace score_dag::metrics {
namespace {

void require_same_size(const Dag& a, const Dag& b) {
    if (a.size() != b.size()) {
        throw DataError("graphs have different node counts (" + std::to_string(a.size()) +
                        " vs " + std::to_string(b.size()) + ")");
    }
}

// Strict descendants of `node`.
std::vector<char> descendants(const Dag& g, int node) {
    std::vector<char> mark(static_cast<std::size_t>(g.size()), 0);
    std::vector<int> stack = g.children(node);
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (mark[static_cast<std::size_t>(v)]) continue;
        mark[static_cast<std::size_t>(v)] = 1;
        for (int c : g.children(v)) stack.push_back(c);
    }
    return mark;
}

// Nodes with a directed path into any flagged node, including the flagged nodes.
std::vector<char> ancestors_of_set(const Dag& g, const std::vector<char>& set) {
    std::vector<char> mark(set.size(), 0);
    std::vector<int> stack;
    for (int v = 0; v < g.size(); ++v) {
        if (set[static_cast<std::size_t>(v)]) stack.push_back(v);
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (mark[static_cast<std::size_t>(v)]) continue;
        mark[static_cast<std::size_t>(v)] = 1;
        for (int p : g.parents(v)) stack.push_back(p);
    }
    return mark;
}

}  // namespace

int shd(const Dag& truth, const Dag& estimate) {
    require_same_size(truth, estimate);
    int total = 0;
    const int d = truth.size();
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            const bool t_ij = truth.has_edge(i, j), t_ji = truth.has_edge(j, i);
            const bool e_ij = estimate.has_edge(i, j), e_ji = estimate.has_edge(j, i);
            if (t_ij != e_ij || t_ji != e_ji) ++total;
        }
    }
    return total;
}

int d_top(const TopoOrder& order, const Dag& truth) {
    if (order.size() != truth.size()) {
        throw DataError("order length " + std::to_string(order.size()) +
                        " does not match graph size " + std::to_string(truth.size()));
    }
    const std::vector<int> pos = order.positions();
    int violated = 0;
    for (const auto& [from, to] : truth.edges()) {
        if (pos[static_cast<std::size_t>(to)] < pos[static_cast<std::size_t>(from)]) ++violated;
    }
    return violated;
}

bool d_separated(const Dag& g, int x, int y, const std::vector<char>& given) {
    const int d = g.size();
    const std::vector<char> anc = ancestors_of_set(g, given);
    // State index: 2*v for "arrived from a child" (moving up), 2*v+1 for "arrived from a parent".
    std::vector<char> visited(static_cast<std::size_t>(2 * d), 0);
    std::vector<int> stack{2 * x};
    while (!stack.empty()) {
        const int state = stack.back();
        stack.pop_back();
        if (visited[static_cast<std::size_t>(state)]) continue;
        visited[static_cast<std::size_t>(state)] = 1;
        const int v = state / 2;
        const bool from_child = (state % 2) == 0;
        const bool observed = given[static_cast<std::size_t>(v)] != 0;
        if (!observed && v == y) return false;
        if (from_child) {
            if (observed) continue;
            for (int p : g.parents(v)) stack.push_back(2 * p);
            for (int c : g.children(v)) stack.push_back(2 * c + 1);
        } else {
            if (!observed) {
                for (int c : g.children(v)) stack.push_back(2 * c + 1);
            }
            if (anc[static_cast<std::size_t>(v)]) {
                for (int p : g.parents(v)) stack.push_back(2 * p);
            }
        }
    }
    return true;
}

int sid(const Dag& truth, const Dag& estimate) {
    require_same_size(truth, estimate);
    if (!truth.is_acyclic()) throw CycleError(-1, "SID: true graph is not acyclic");
    if (!estimate.is_acyclic()) throw CycleError(-1, "SID: estimated graph is not acyclic");

    const int d = truth.size();
    const auto n = static_cast<std::size_t>(d);
    std::vector<std::vector<char>> desc(n);
    for (int v = 0; v < d; ++v) desc[static_cast<std::size_t>(v)] = descendants(truth, v);

    int wrong = 0;
    for (int i = 0; i < d; ++i) {
        const auto& de_i = desc[static_cast<std::size_t>(i)];
        std::vector<char> adjust(n, 0);
        for (int p : estimate.parents(i)) adjust[static_cast<std::size_t>(p)] = 1;

        for (int j = 0; j < d; ++j) {
            if (j == i) continue;
            if (adjust[static_cast<std::size_t>(j)]) {
                // The estimate claims j is upstream of i, so it predicts no effect.
                if (de_i[static_cast<std::size_t>(j)]) ++wrong;
                continue;
            }
            // Nodes other than i lying on a directed path i -> ... -> j.
            std::vector<char> on_causal_path(n, 0);
            bool any_causal = false;
            for (int w = 0; w < d; ++w) {
                if (de_i[static_cast<std::size_t>(w)] &&
                    (w == j || desc[static_cast<std::size_t>(w)][static_cast<std::size_t>(j)])) {
                    on_causal_path[static_cast<std::size_t>(w)] = 1;
                    any_causal = true;
                }
            }
            bool valid = true;
            if (any_causal) {
                for (int z = 0; z < d && valid; ++z) {
                    if (!adjust[static_cast<std::size_t>(z)]) continue;
                    for (int w = 0; w < d; ++w) {
                        if (on_causal_path[static_cast<std::size_t>(w)] &&
                            (z == w || desc[static_cast<std::size_t>(w)][static_cast<std::size_t>(z)])) {
                            valid = false;
                            break;
                        }
                    }
                }
            }
            if (valid) {
                Dag backdoor = truth;
                for (int w = 0; w < d; ++w) {
                    if (on_causal_path[static_cast<std::size_t>(w)] && truth.has_edge(i, w)) {
                        backdoor.set_edge(i, w, false);
                    }
                }
                valid = d_separated(backdoor, i, j, adjust);
            }
            if (!valid) ++wrong;
        }
    }
    return wrong;
}

MetricReport evaluate(const Dag& truth, const Dag& estimate, const std::optional<TopoOrder>& order) {
    MetricReport r;
    r.shd = shd(truth, estimate);
    r.sid = sid(truth, estimate);
    if (order) r.d_top = d_top(*order, truth);
    return r;
}

}  // namespace score_dag::metrics
