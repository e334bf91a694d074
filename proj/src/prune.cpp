#include "score_dag/prune.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include <boost/math/distributions/fisher_f.hpp>

#include "score_dag/bspline.hpp"
#include "score_dag/error.hpp"

namespace score_dag::prune {
namespace {

struct Group {
    int covariate;
    Eigen::Index first_col;
    Eigen::Index cols;
};

// Residual sum of squares of the ridge-stabilized least-squares fit of y on
// the selected design columns.
double fit_rss(const Matrix& design, const std::vector<Eigen::Index>& cols, const Vector& y, double ridge) {
    const auto p = static_cast<Eigen::Index>(cols.size());
    Matrix sub(design.rows(), p);
    for (Eigen::Index c = 0; c < p; ++c) sub.col(c) = design.col(cols[static_cast<std::size_t>(c)]);
    Matrix normal = sub.transpose() * sub;
    normal.diagonal().array() += ridge;
    Eigen::LDLT<Matrix> ldlt(normal);
    if (ldlt.info() != Eigen::Success) throw NumericalError("spline regression normal equations are singular");
    const Vector beta = ldlt.solve(sub.transpose() * y);
    return (y - sub * beta).squaredNorm();
}

}  // namespace

void PruneConfig::validate() const {
    if (!(cutoff > 0.0 && cutoff < 1.0)) throw ConfigError("prune cutoff must lie in (0, 1)");
    if (basis_size < 3) throw ConfigError("prune basis_size must be >= 3");
    if (!(ridge >= 0.0)) throw ConfigError("prune ridge must be non-negative");
}

std::vector<double> covariate_pvalues(const DataMatrix& x, int node, const std::vector<int>& covariates,
                                      const PruneConfig& cfg, std::vector<PruneWarning>* warnings) {
    cfg.validate();
    std::vector<double> pvalues(covariates.size(), 1.0);
    if (covariates.empty()) return pvalues;
    const Eigen::Index n = x.rows();
    const Vector y = x.col(node);
    auto warn = [&](int cov, std::string msg) {
        if (warnings) warnings->push_back(PruneWarning{node, cov, std::move(msg)});
    };

    // Column 0 is the intercept; each covariate contributes its centered basis
    // minus one column (the full basis sums to one, aliasing the intercept).
    std::vector<Matrix> blocks;
    std::vector<Group> groups;
    std::vector<std::size_t> group_slot;
    Eigen::Index total_cols = 1;
    for (std::size_t c = 0; c < covariates.size(); ++c) {
        const int cov = covariates[c];
        const Vector xc = x.col(cov);
        if (!((xc.array() - xc(0)).abs().maxCoeff() > 0.0)) {
            warn(cov, "covariate is constant; dropped");
            continue;
        }
        const BSplineBasis basis(xc, cfg.basis_size);
        Matrix b = basis.evaluate(xc);
        if (b.cols() < 2) {
            warn(cov, "covariate has too few distinct values for a spline basis; dropped");
            continue;
        }
        b.rowwise() -= b.colwise().mean();
        blocks.push_back(b.leftCols(b.cols() - 1));
        groups.push_back(Group{cov, total_cols, b.cols() - 1});
        group_slot.push_back(c);
        total_cols += b.cols() - 1;
    }
    if (groups.empty()) return pvalues;

    Matrix design(n, total_cols);
    design.col(0).setOnes();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        design.middleCols(groups[g].first_col, groups[g].cols) = blocks[g];
    }

    // Drop groups that add no rank over the groups before them.
    Eigen::ColPivHouseholderQR<Matrix> qr(design);
    if (qr.rank() < design.cols()) {
        std::vector<Group> kept;
        std::vector<std::size_t> kept_slot;
        Matrix acc = design.leftCols(1);
        for (std::size_t g = 0; g < groups.size(); ++g) {
            Matrix trial(n, acc.cols() + groups[g].cols);
            trial << acc, design.middleCols(groups[g].first_col, groups[g].cols);
            Eigen::ColPivHouseholderQR<Matrix> tq(trial);
            if (tq.rank() == trial.cols()) {
                Group moved = groups[g];
                moved.first_col = acc.cols();
                kept.push_back(moved);
                kept_slot.push_back(group_slot[g]);
                acc = std::move(trial);
            } else {
                warn(groups[g].covariate, "covariate basis is collinear with earlier covariates; dropped");
            }
        }
        design = std::move(acc);
        groups = std::move(kept);
        group_slot = std::move(kept_slot);
        if (groups.empty()) return pvalues;
    }

    const Eigen::Index p_full = design.cols();
    const Eigen::Index df_resid = n - p_full;
    if (df_resid < 1) throw DataError("not enough samples for the spline regression of node " + std::to_string(node));

    std::vector<Eigen::Index> all_cols(static_cast<std::size_t>(p_full));
    for (Eigen::Index c = 0; c < p_full; ++c) all_cols[static_cast<std::size_t>(c)] = c;
    const double rss_full = fit_rss(design, all_cols, y, cfg.ridge);

    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::vector<Eigen::Index> reduced;
        for (Eigen::Index c = 0; c < p_full; ++c) {
            if (c < groups[g].first_col || c >= groups[g].first_col + groups[g].cols) reduced.push_back(c);
        }
        const double rss_reduced = fit_rss(design, reduced, y, cfg.ridge);
        const double q = static_cast<double>(groups[g].cols);
        double pvalue = 1.0;
        const double gain = std::max(0.0, rss_reduced - rss_full);
        if (rss_full <= 0.0) {
            pvalue = gain > 0.0 ? 0.0 : 1.0;
        } else {
            const double f = (gain / q) / (rss_full / static_cast<double>(df_resid));
            boost::math::fisher_f dist(q, static_cast<double>(df_resid));
            pvalue = boost::math::cdf(boost::math::complement(dist, f));
        }
        pvalues[group_slot[g]] = pvalue;
    }
    return pvalues;
}

Dag prune(const DataMatrix& x, const TopoOrder& order, const PruneConfig& cfg, std::vector<PruneWarning>* warnings) {
    cfg.validate();
    const int d = static_cast<int>(x.cols());
    if (order.size() != d) {
        throw DataError("order has " + std::to_string(order.size()) + " nodes but data has " +
                        std::to_string(d) + " columns");
    }
    Dag out(d);
    const auto n = static_cast<long long>(x.rows());
    const auto max_covariates = static_cast<int>((n - 1) / cfg.basis_size);
    for (int pos = 1; pos < d; ++pos) {
        const int node = order[pos];
        const int first = std::max(0, pos - max_covariates);
        if (first > 0 && warnings) {
            warnings->push_back(PruneWarning{node, -1,
                                             "too few samples for all predecessors; using the " +
                                                 std::to_string(pos - first) + " most recent"});
        }
        std::vector<int> covariates;
        for (int k = first; k < pos; ++k) covariates.push_back(order[k]);
        const std::vector<double> pvalues = covariate_pvalues(x, node, covariates, cfg, warnings);
        for (std::size_t c = 0; c < covariates.size(); ++c) {
            if (pvalues[c] < cfg.cutoff) out.set_edge(covariates[c], node);
        }
    }
    return out;
}

Discovery discover(const DataMatrix& x, double eta, const PruneConfig& cfg) {
    using Clock = std::chrono::steady_clock;
    cfg.validate();
    const auto start = Clock::now();
    Discovery result;
    result.trace = order::score_order(x, eta);
    const auto ordered = Clock::now();
    result.graph = prune(x, result.trace.order, cfg, &result.warnings);
    const auto done = Clock::now();
    result.order_seconds = std::chrono::duration<double>(ordered - start).count();
    result.total_seconds = std::chrono::duration<double>(done - start).count();
    return result;
}

}  // namespace score_dag::prune
