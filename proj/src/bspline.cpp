#include "score_dag/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "score_dag/error.hpp"

namespace score_dag::prune {

BSplineBasis::BSplineBasis(const Vector& x, int basis_size) {
    if (basis_size < 3) throw ConfigError("spline basis needs at least 3 functions");
    if (x.size() < 2) throw DataError("spline basis needs at least 2 points");
    std::vector<double> sorted(x.data(), x.data() + x.size());
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    if (!(hi > lo)) throw DataError("spline basis: covariate is constant");

    degree_ = std::min(3, basis_size - 1);
    const int interior = basis_size - degree_ - 1;
    knots_.assign(static_cast<std::size_t>(degree_ + 1), lo);
    for (int k = 1; k <= interior; ++k) {
        // Type-7 quantile at probability k / (interior + 1).
        const double pos = static_cast<double>(k) / (interior + 1) * static_cast<double>(sorted.size() - 1);
        const auto below = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(below);
        const double q = below + 1 < sorted.size() ? sorted[below] + frac * (sorted[below + 1] - sorted[below])
                                                  : sorted[below];
        if (q > knots_.back() && q < hi) knots_.push_back(q);
    }
    knots_.insert(knots_.end(), static_cast<std::size_t>(degree_ + 1), hi);
}

int BSplineBasis::span(double x) const {
    const int n_basis = size();
    // The last non-degenerate interval is closed on the right.
    if (x >= knots_[static_cast<std::size_t>(n_basis)]) return n_basis - 1;
    if (x <= knots_[static_cast<std::size_t>(degree_)]) return degree_;
    const auto it = std::upper_bound(knots_.begin() + degree_, knots_.begin() + n_basis + 1, x);
    return static_cast<int>(it - knots_.begin()) - 1;
}

Matrix BSplineBasis::evaluate(const Vector& x) const {
    const int n_basis = size();
    Matrix out = Matrix::Zero(x.size(), n_basis);
    std::vector<double> value(static_cast<std::size_t>(degree_ + 1));
    std::vector<double> left(static_cast<std::size_t>(degree_ + 1));
    std::vector<double> right(static_cast<std::size_t>(degree_ + 1));
    for (Eigen::Index r = 0; r < x.size(); ++r) {
        // Values outside the fitted range are clamped to the boundary.
        const double xv = std::clamp(x(r), knots_.front(), knots_.back());
        const int s = span(xv);
        // Cox-de Boor triangle for the degree+1 non-zero functions at span s.
        value[0] = 1.0;
        for (int j = 1; j <= degree_; ++j) {
            left[static_cast<std::size_t>(j)] = xv - knots_[static_cast<std::size_t>(s + 1 - j)];
            right[static_cast<std::size_t>(j)] = knots_[static_cast<std::size_t>(s + j)] - xv;
            double saved = 0.0;
            for (int k = 0; k < j; ++k) {
                const double denom = right[static_cast<std::size_t>(k + 1)] + left[static_cast<std::size_t>(j - k)];
                const double temp = denom != 0.0 ? value[static_cast<std::size_t>(k)] / denom : 0.0;
                value[static_cast<std::size_t>(k)] = saved + right[static_cast<std::size_t>(k + 1)] * temp;
                saved = left[static_cast<std::size_t>(j - k)] * temp;
            }
            value[static_cast<std::size_t>(j)] = saved;
        }
        for (int k = 0; k <= degree_; ++k) out(r, s - degree_ + k) = value[static_cast<std::size_t>(k)];
    }
    return out;
}

}  // namespace score_dag::prune
