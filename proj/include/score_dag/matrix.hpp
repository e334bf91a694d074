#pragma once

#include <Eigen/Dense>

namespace score_dag {

/// n x d observations, one sample per row. Column-major, so each variable's
/// samples are contiguous (the layout the kernel inner loops vectorize over).
using DataMatrix = Eigen::MatrixXd;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

}  // namespace score_dag
