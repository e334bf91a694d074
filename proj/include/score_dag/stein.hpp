#pragma once

#include "score_dag/kernel.hpp"
#include "score_dag/matrix.hpp"

namespace score_dag::stein {

inline constexpr double kDefaultEta = 0.01;

/// Row k approximates grad log p(x_k).
struct ScoreEstimate {
    Matrix g;
};

/// Entry (k, j) approximates d^2 log p(x_k) / d x_j^2.
struct JacobianDiagEstimate {
    Matrix j;
    double bandwidth = 0.0;
};

/// Stein gradient estimator: G = -(K + eta I)^{-1} <grad, K>, with K the RBF
/// Gram matrix at the median-heuristic bandwidth.
ScoreEstimate stein_gradient(const DataMatrix& x, double eta = kDefaultEta);

/// Same estimator at a caller-chosen bandwidth.
ScoreEstimate stein_gradient_with_bandwidth(const DataMatrix& x, double s, double eta = kDefaultEta);

/// Stein Hessian-diagonal estimator:
///   J = -(G o G) + (K + eta I)^{-1} <diag grad^2, K>
/// where G o G is the entrywise square of the Stein gradient estimate. Both
/// ridge problems share eta and a single Cholesky factorization of K + eta I.
JacobianDiagEstimate stein_hessian_diag(const DataMatrix& x, double eta = kDefaultEta);

JacobianDiagEstimate jacobian_diag_with_bandwidth(const DataMatrix& x, double s, double eta = kDefaultEta);

}  // namespace score_dag::stein
