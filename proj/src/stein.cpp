#include "score_dag/stein.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "score_dag/error.hpp"

namespace score_dag::stein {
namespace {

void check_inputs(const DataMatrix& x, double eta) {
    if (x.rows() < 2) {
        throw DataError("Stein estimators need at least 2 samples, got " + std::to_string(x.rows()));
    }
    if (!(eta > 0.0) || !std::isfinite(eta)) {
        throw ConfigError("ridge parameter eta must be positive and finite, got " + std::to_string(eta));
    }
    if (!x.allFinite()) throw DataError("data matrix contains non-finite entries");
}

// Solves (K + eta I) [A | B] = [grad_sum | diag_hess_sum] with one factorization.
Matrix ridge_solve(const kernel::KernelContext& ctx, double eta, bool with_hessian) {
    const auto n = ctx.gram.rows();
    const auto d = ctx.grad_sum.cols();
    Matrix system = ctx.gram;
    system.diagonal().array() += eta;
    Eigen::LLT<Matrix> llt(system);
    if (llt.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "Cholesky factorization of K + eta I failed (n=" << n << ", eta=" << eta
            << ", bandwidth=" << ctx.bandwidth << ", min diag=" << system.diagonal().minCoeff() << ")";
        throw NumericalError(msg.str());
    }
    Matrix rhs(n, with_hessian ? 2 * d : d);
    rhs.leftCols(d) = ctx.grad_sum;
    if (with_hessian) rhs.rightCols(d) = ctx.diag_hess_sum;
    llt.solveInPlace(rhs);
    return rhs;
}

}  // namespace

ScoreEstimate stein_gradient_with_bandwidth(const DataMatrix& x, double s, double eta) {
    check_inputs(x, eta);
    const kernel::KernelContext ctx = kernel::build_context(x, s);
    return ScoreEstimate{-ridge_solve(ctx, eta, false)};
}

ScoreEstimate stein_gradient(const DataMatrix& x, double eta) {
    check_inputs(x, eta);
    return stein_gradient_with_bandwidth(x, kernel::median_bandwidth(x), eta);
}

JacobianDiagEstimate jacobian_diag_with_bandwidth(const DataMatrix& x, double s, double eta) {
    check_inputs(x, eta);
    const kernel::KernelContext ctx = kernel::build_context(x, s);
    const Matrix solved = ridge_solve(ctx, eta, true);
    const auto d = x.cols();
    JacobianDiagEstimate out;
    out.bandwidth = s;
    out.j = solved.rightCols(d) - solved.leftCols(d).array().square().matrix();
    if (!out.j.allFinite()) {
        throw NumericalError("Stein Hessian estimate is not finite (bandwidth=" + std::to_string(s) + ")");
    }
    return out;
}

JacobianDiagEstimate stein_hessian_diag(const DataMatrix& x, double eta) {
    check_inputs(x, eta);
    return jacobian_diag_with_bandwidth(x, kernel::median_bandwidth(x), eta);
}

}  // namespace score_dag::stein
