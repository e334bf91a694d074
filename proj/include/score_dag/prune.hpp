#pragma once

#include <string>
#include <vector>

#include "score_dag/dag.hpp"
#include "score_dag/matrix.hpp"
#include "score_dag/order.hpp"

namespace score_dag::prune {

struct PruneConfig {
    double cutoff = 0.001;  // keep an edge when its group F-test p-value is below this
    int basis_size = 10;    // spline functions per covariate
    double ridge = 1e-8;    // added to the normal equations for stability only

    void validate() const;
};

struct PruneWarning {
    int node = -1;
    int covariate = -1;
    std::string message;
};

/// For every node, regress it on an additive spline expansion of all its
/// predecessors in `order` jointly and keep predecessor i iff the F-test
/// that i's coefficient group is zero rejects at `cutoff`. When n is too
/// small for all predecessors, only the most recent ones that fit are used.
/// Degenerate covariates (constant, or collinear with earlier ones) are
/// dropped and reported through `warnings`.
Dag prune(const DataMatrix& x, const TopoOrder& order, const PruneConfig& cfg = {},
          std::vector<PruneWarning>* warnings = nullptr);

/// Per-covariate p-values of one node's regression, aligned with `covariates`.
/// Dropped covariates get p-value 1.
std::vector<double> covariate_pvalues(const DataMatrix& x, int node, const std::vector<int>& covariates,
                                      const PruneConfig& cfg, std::vector<PruneWarning>* warnings = nullptr);

struct Discovery {
    Dag graph;
    order::OrderTrace trace;
    std::vector<PruneWarning> warnings;
    double order_seconds = 0.0;
    double total_seconds = 0.0;
};

/// Order search followed by pruning.
Discovery discover(const DataMatrix& x, double eta = stein::kDefaultEta, const PruneConfig& cfg = {});

}  // namespace score_dag::prune
