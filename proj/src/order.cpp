#include "score_dag/order.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "score_dag/error.hpp"

namespace score_dag::order {

std::vector<double> column_variances(const Matrix& m) {
    std::vector<double> out(static_cast<std::size_t>(m.cols()), 0.0);
    const auto n = m.rows();
    if (n < 2) return out;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double mean = m.col(j).mean();
        out[static_cast<std::size_t>(j)] = (m.col(j).array() - mean).square().sum() / static_cast<double>(n - 1);
    }
    return out;
}

OrderTrace score_order_with(const DataMatrix& x, const JacobianEstimator& estimator) {
    const int d = static_cast<int>(x.cols());
    if (d < 1) throw DataError("order search needs at least one column");
    if (x.rows() < 2) throw DataError("order search needs at least two samples");

    std::vector<int> remaining(static_cast<std::size_t>(d));
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<int> reversed_order;
    OrderTrace trace;

    for (int step = 0; step < d; ++step) {
        DataMatrix sub(x.rows(), static_cast<Eigen::Index>(remaining.size()));
        for (std::size_t c = 0; c < remaining.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = x.col(remaining[c]);

        stein::JacobianDiagEstimate est;
        try {
            est = estimator(sub, remaining);
        } catch (const Error& e) {
            const std::string msg = "order search step " + std::to_string(step) + ": " + e.what();
            switch (e.kind()) {
                case ErrorKind::Config: throw ConfigError(msg);
                case ErrorKind::Data: throw DataError(msg);
                case ErrorKind::Numerical: throw NumericalError(msg);
            }
            throw;
        }
        if (est.j.rows() != sub.rows() || est.j.cols() != sub.cols()) {
            throw DataError("Jacobian estimator returned a matrix of the wrong shape at step " + std::to_string(step));
        }

        OrderStep rec;
        rec.remaining = remaining;
        rec.variance = column_variances(est.j);
        rec.bandwidth = est.bandwidth;
        // Strict < keeps the first (smallest id) minimum; remaining is ascending.
        std::size_t best = 0;
        for (std::size_t c = 1; c < rec.variance.size(); ++c) {
            if (rec.variance[c] < rec.variance[best]) best = c;
        }
        rec.leaf = remaining[best];
        rec.leaf_mean = est.j.col(static_cast<Eigen::Index>(best)).mean();
        trace.steps.push_back(std::move(rec));

        reversed_order.push_back(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    std::reverse(reversed_order.begin(), reversed_order.end());
    trace.order = TopoOrder(std::move(reversed_order));
    return trace;
}

OrderTrace score_order(const DataMatrix& x, double eta) {
    return score_order_with(x, [eta](const DataMatrix& sub, const std::vector<int>&) {
        return stein::stein_hessian_diag(sub, eta);
    });
}

TopoOrder var_sort_order(const DataMatrix& x) {
    const std::vector<double> var = column_variances(x);
    std::vector<int> idx(var.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return var[static_cast<std::size_t>(a)] < var[static_cast<std::size_t>(b)];
    });
    return TopoOrder(std::move(idx));
}

}  // namespace score_dag::order
