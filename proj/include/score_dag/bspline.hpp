#pragma once

#include <vector>

#include "score_dag/matrix.hpp"

namespace score_dag::prune {

/// Clamped B-spline basis on [min(x), max(x)] with interior knots at
/// empirical quantiles of x. Cubic when basis_size >= 4; lower degree for
/// smaller bases. Repeated quantiles (discrete data) are merged, which can
/// shrink the basis below the requested size.
class BSplineBasis {
public:
    BSplineBasis(const Vector& x, int basis_size);

    int size() const noexcept { return static_cast<int>(knots_.size()) - degree_ - 1; }
    int degree() const noexcept { return degree_; }
    const std::vector<double>& knots() const noexcept { return knots_; }

    /// rows(x) x size() matrix of basis values; each row sums to 1 on [lo, hi].
    Matrix evaluate(const Vector& x) const;

private:
    int span(double x) const;

    int degree_ = 3;
    std::vector<double> knots_;
};

}  // namespace score_dag::prune
