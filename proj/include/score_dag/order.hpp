#pragma once

#include <functional>
#include <vector>

#include "score_dag/dag.hpp"
#include "score_dag/matrix.hpp"
#include "score_dag/stein.hpp"

namespace score_dag::order {

struct OrderStep {
    std::vector<int> remaining;   // original node ids still in play, ascending
    std::vector<double> variance; // V_j aligned with `remaining`
    int leaf = -1;                // original id of the removed node
    double bandwidth = 0.0;       // 0 when the estimator has no bandwidth
    double leaf_mean = 0.0;       // mean of the leaf's Jacobian column (about -1/sigma^2)
};

struct OrderTrace {
    TopoOrder order;  // sources first
    std::vector<OrderStep> steps;
};

/// Jacobian-diagonal estimate for the columns of `sub`, which hold the
/// original nodes listed in `nodes`.
using JacobianEstimator = std::function<stein::JacobianDiagEstimate(const DataMatrix& sub,
                                                                     const std::vector<int>& nodes)>;

/// Leaf peeling: repeatedly estimate diag of the score Jacobian on the
/// surviving columns, remove the column whose entries vary least (unbiased
/// variance; ties to the smallest node id), and prepend it to the order.
OrderTrace score_order(const DataMatrix& x, double eta = stein::kDefaultEta);

/// Same loop with a pluggable Jacobian estimator.
OrderTrace score_order_with(const DataMatrix& x, const JacobianEstimator& estimator);

/// Nodes by increasing marginal variance, ties by node id.
TopoOrder var_sort_order(const DataMatrix& x);

/// Unbiased (n - 1) sample variance of each column.
std::vector<double> column_variances(const Matrix& m);

}  // namespace score_dag::order
