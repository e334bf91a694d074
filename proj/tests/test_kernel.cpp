#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/finite_diff.hpp"
#include "score_dag/error.hpp"
#include "score_dag/kernel.hpp"
#include "score_dag/parallel.hpp"
#include "score_dag/random.hpp"

using namespace score_dag;
using namespace score_dag::kernel;

namespace {

DataMatrix rows(std::initializer_list<std::initializer_list<double>> r) {
    DataMatrix x(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : r) {
        Eigen::Index j = 0;
        for (double v : row) x(i, j++) = v;
        ++i;
    }
    return x;
}

DataMatrix gaussian_data(int n, int d, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    DataMatrix x(n, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < n; ++i) x(i, j) = z(rng) * (1.0 + 0.5 * j);
    return x;
}

// Plain-loop RBF between arbitrary points, independent of the library.
double rbf(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b, double s) {
    return std::exp(-(a - b).squaredNorm() / (2 * s * s));
}

// sum_k d^m kappa(x_i, x_k) / d x_kj^m by differencing the second argument.
Matrix fd_kernel_sum(const DataMatrix& x, double s, int order) {
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    const double h = 1e-2 * s;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            for (Eigen::Index k = 0; k < x.rows(); ++k) {
                auto f = [&](double t) {
                    Eigen::RowVectorXd xk = x.row(k);
                    xk(j) = t;
                    return rbf(x.row(i), xk, s);
                };
                out(i, j) += order == 1 ? oracle::central_first(f, x(k, j), h)
                                        : oracle::central_second(f, x(k, j), h);
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("median heuristic examples") {
    CHECK(median_bandwidth(rows({{0}, {2}})) == 2.0);
    CHECK(median_bandwidth(rows({{0}, {1}, {3}})) == 2.0);
    CHECK(median_bandwidth(rows({{0, 0}, {3, 4}, {0, 0}})) == 5.0);
    // Four points: six distances {1,2,3,1,2,1} -> sorted 1,1,1,2,2,3 -> (1+2)/2.
    CHECK(median_bandwidth(rows({{0}, {1}, {2}, {3}})) == 1.5);
    CHECK_THROWS_AS(median_bandwidth(rows({{1, 1}, {1, 1}, {1, 1}})), DataError);
    CHECK_THROWS_AS(median_bandwidth(rows({{1}})), DataError);
}

TEST_CASE("Gram matrix") {
    const DataMatrix x = gaussian_data(60, 3, 1);
    const Matrix k = gram(x, 1.3);
    for (int i = 0; i < 60; ++i) CHECK(k(i, i) == 1.0);
    CHECK(k == k.transpose());
    CHECK(k.minCoeff() > 0.0);
    CHECK(k.maxCoeff() <= 1.0);

    const Matrix two = gram(rows({{0, 0}, {0.6, 0.8}}), 1.0);
    CHECK(two(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    CHECK(two(0, 1) == doctest::Approx(0.60653).epsilon(1e-5));
    CHECK_THROWS_AS(gram(x, 0.0), ConfigError);
    CHECK_THROWS_AS(gram(x, -1.0), ConfigError);
}

TEST_CASE("Gram matrix is positive semidefinite") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 20 + static_cast<int>(seed) * 18;
        const DataMatrix x = gaussian_data(n, 1 + static_cast<int>(seed % 4), seed);
        const Matrix k = gram(x, median_bandwidth(x));
        Eigen::SelfAdjointEigenSolver<Matrix> eig(k);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
    }
}

TEST_CASE("kernel derivative sums: closed-form examples") {
    CHECK(grad_k_sum(rows({{0.4, -1.0}}), 0.7).isZero(0.0));
    const Matrix h1 = diag_hess_k_sum(rows({{0.4, -1.0}}), 1.0);
    CHECK(h1(0, 0) == -1.0);
    CHECK(h1(0, 1) == -1.0);

    const double a = 0.8, s = 0.5;
    const Matrix g = grad_k_sum(rows({{0}, {a}}), s);
    CHECK(g(0, 0) == doctest::Approx(std::exp(-a * a / (2 * s * s)) * (-a) / (s * s)).epsilon(1e-14));
    CHECK(g(1, 0) == doctest::Approx(-g(0, 0)).epsilon(1e-14));

    const Matrix h = diag_hess_k_sum(rows({{0}, {s}}), s);
    CHECK(h(0, 0) == doctest::Approx(-1.0 / (s * s)).epsilon(1e-14));
}

TEST_CASE("kernel derivative sums match finite differences") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 20, d = 3;
        const DataMatrix x = gaussian_data(n, d, seed + 50);
        const double s = median_bandwidth(x) * (0.5 + 0.1 * static_cast<double>(seed % 5));
        CHECK(oracle::max_relative_error(grad_k_sum(x, s), fd_kernel_sum(x, s, 1)) < 1e-6);
        CHECK(oracle::max_relative_error(diag_hess_k_sum(x, s), fd_kernel_sum(x, s, 2)) < 1e-5);
    }
}

TEST_CASE("kernel quantities are translation invariant") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const DataMatrix x = gaussian_data(80, 4, seed);
        Eigen::RowVectorXd shift(4);
        shift << 3.0, -7.5, 0.25, 11.0;
        const DataMatrix y = x.rowwise() + shift;
        const double sx = median_bandwidth(x), sy = median_bandwidth(y);
        CHECK(std::abs(sx - sy) <= 1e-12 * sx);
        const KernelContext cx = build_context(x, sx), cy = build_context(y, sx);
        CHECK(oracle::max_relative_error(cy.gram, cx.gram) < 1e-12);
        CHECK(oracle::max_relative_error(cy.grad_sum, cx.grad_sum) < 1e-12);
        CHECK(oracle::max_relative_error(cy.diag_hess_sum, cx.diag_hess_sum) < 1e-12);
    }
}

TEST_CASE("context is independent of the thread split") {
    const DataMatrix x = gaussian_data(300, 3, 9);
    const double s = median_bandwidth(x);
    set_internal_threads(1);
    const KernelContext a = build_context(x, s);
    set_internal_threads(4);
    const KernelContext b = build_context(x, s);
    set_internal_threads(0);
    CHECK(a.gram == b.gram);
    CHECK(a.grad_sum == b.grad_sum);
    CHECK(a.diag_hess_sum == b.diag_hess_sum);
}
