#pragma once

#include <optional>
#include <vector>

#include "score_dag/dag.hpp"

namespace score_dag::metrics {

struct MetricReport {
    int shd = 0;
    int sid = 0;
    std::optional<int> d_top;  // only for order-based estimates

    bool operator==(const MetricReport&) const = default;
};

/// Structural Hamming distance over unordered node pairs. A missing, extra,
/// or reversed edge each count once.
int shd(const Dag& truth, const Dag& estimate);

/// Number of true edges i -> j for which j comes before i in `order`.
int d_top(const TopoOrder& order, const Dag& truth);

/// Structural intervention distance: ordered pairs (i, j) for which adjusting
/// for the estimated parents of i does not give p(x_j | do(x_i)) in `truth`.
/// Both graphs must be acyclic (CycleError otherwise).
int sid(const Dag& truth, const Dag& estimate);

MetricReport evaluate(const Dag& truth, const Dag& estimate,
                      const std::optional<TopoOrder>& order = std::nullopt);

/// d-separation of x and y given the nodes flagged in `given` (reachability
/// formulation). Exposed for tests.
bool d_separated(const Dag& g, int x, int y, const std::vector<char>& given);

}  // namespace score_dag::metrics
