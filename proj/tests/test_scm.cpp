#include <doctest.h>

#include <cmath>

#include "oracles/finite_diff.hpp"
#include "score_dag/error.hpp"
#include "score_dag/order.hpp"
#include "score_dag/scm.hpp"

using namespace score_dag;
using namespace score_dag::scm;

namespace {

ScmModel sin_chain(double var0, double var1, NoiseFamily family = NoiseFamily::Gaussian) {
    ScmModel m;
    const std::pair<int, int> e[] = {{0, 1}};
    m.graph = Dag::from_edges(2, e);
    m.link = LinkKind::Parametric;
    m.noise = {NoiseSpec{family, var0}, NoiseSpec{family, var1}};
    m.terms = {{}, {ParametricTerm{0, 1.0, 2.0, 0.0, 0.0}}};
    return m;
}

double sample_var(const Vector& v) {
    return (v.array() - v.mean()).square().sum() / static_cast<double>(v.size() - 1);
}

// Richardson central differences of the summed log-density along (row, col).
Matrix fd_score(const ScmModel& m, const DataMatrix& x, double h = 1e-3) {
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            DataMatrix row = x.row(k);
            auto f = [&](double t) {
                DataMatrix r = row;
                r(0, j) = t;
                return log_density(m, r)(0);
            };
            out(k, j) = oracle::central_first(f, x(k, j), h);
        }
    }
    return out;
}

Matrix fd_jacobian_diag(const ScmModel& m, const DataMatrix& x, double h = 1e-3) {
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            DataMatrix row = x.row(k);
            auto s = [&](double t) {
                DataMatrix r = row;
                r(0, j) = t;
                return analytic_score(m, r)(0, j);
            };
            out(k, j) = oracle::central_first(s, x(k, j), h);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("independent gaussian columns have the configured variance") {
    ScmModel m;
    m.graph = Dag(3);
    m.link = LinkKind::Parametric;
    m.noise.assign(3, NoiseSpec{NoiseFamily::Gaussian, 0.5});
    m.terms.resize(3);
    const int n = 5000;
    const DataMatrix x = sample_dataset(m, n, 11);
    const double se = 0.5 * std::sqrt(2.0 / (n - 1));
    for (int j = 0; j < 3; ++j) CHECK(std::abs(sample_var(x.col(j)) - 0.5) < 3 * se);
}

TEST_CASE("every noise family matches its variance and is centred") {
    for (auto family : {NoiseFamily::Gaussian, NoiseFamily::Laplace, NoiseFamily::Gumbel}) {
        ScmModel m;
        m.graph = Dag(1);
        m.link = LinkKind::Gp;
        m.noise = {NoiseSpec{family, 0.6}};
        const DataMatrix x = sample_dataset(m, 20000, 5);
        CHECK(std::abs(x.col(0).mean()) < 4 * std::sqrt(0.6 / 20000));
        CHECK(sample_var(x.col(0)) == doctest::Approx(0.6).epsilon(0.05));
    }
}

TEST_CASE("sin(2x) chain residual carries the noise variance") {
    const ScmModel m = sin_chain(1.0, 0.4);
    const int n = 5000;
    const DataMatrix x = sample_dataset(m, n, 3);
    const Vector r = x.col(1).array() - (2.0 * x.col(0).array()).sin();
    CHECK(std::abs(sample_var(r) - 0.4) < 3 * 0.4 * std::sqrt(2.0 / (n - 1)));
}

TEST_CASE("single-sample datasets") {
    for (auto link : {LinkKind::Gp, LinkKind::Parametric}) {
        const ScmModel m = make_model(sample_er_dag(6, 6, 2), link, NoiseFamily::Gaussian, 9);
        const DataMatrix x = sample_dataset(m, 1, 4);
        CHECK(x.rows() == 1);
        CHECK(x.cols() == 6);
        CHECK(x.allFinite());
    }
    CHECK_THROWS_AS(sample_dataset(sin_chain(1, 1), 0, 1), ConfigError);
}

TEST_CASE("score examples") {
    ScmModel single;
    single.graph = Dag(1);
    single.link = LinkKind::Parametric;
    single.noise = {NoiseSpec{NoiseFamily::Gaussian, 1.0}};
    single.terms.resize(1);
    DataMatrix x1(1, 1);
    x1 << 2.0;
    CHECK(analytic_score(single, x1)(0, 0) == doctest::Approx(-2.0));
    CHECK(analytic_jacobian_diag(single, x1)(0, 0) == doctest::Approx(-1.0));

    const ScmModel chain = sin_chain(1.0, 1.0);
    DataMatrix x(3, 2);
    x << 0.3, -0.2, -1.1, 0.7, 2.0, 0.1;
    const Matrix s = analytic_score(chain, x);
    for (int k = 0; k < 3; ++k) {
        const double x0 = x(k, 0), x1v = x(k, 1);
        CHECK(s(k, 0) == doctest::Approx(-x0 + 2 * std::cos(2 * x0) * (x1v - std::sin(2 * x0))));
        CHECK(s(k, 1) == doctest::Approx(-(x1v - std::sin(2 * x0))));
    }
}

TEST_CASE("analytic score matches finite differences of the log-density") {
    for (auto family : {NoiseFamily::Gaussian, NoiseFamily::Gumbel, NoiseFamily::Laplace}) {
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const Dag g = sample_er_dag(5, 6, seed);
            const ScmModel m = make_model(g, LinkKind::Parametric, family, seed + 100);
            const DataMatrix x = sample_dataset(m, 12, seed + 200);
            const Matrix analytic = analytic_score(m, x);
            // Laplace log-density has a kink at zero residual; keep rows away from it.
            if (family == NoiseFamily::Laplace) {
                Matrix r = x;
                bool near_kink = false;
                for (int i = 0; i < 5; ++i)
                    for (const auto& t : m.terms[i])
                        for (int k = 0; k < 12; ++k) r(k, i) -= t.value(x(k, t.parent));
                near_kink = (r.cwiseAbs().minCoeff() < 1e-2);
                if (near_kink) continue;
            }
            CHECK(oracle::max_relative_error(analytic, fd_score(m, x)) < 1e-6);
        }
    }
}

TEST_CASE("Jacobian diagonal: leaf columns are constant, the rest follow the score") {
    const ScmModel chain = sin_chain(0.5, 0.5);
    const DataMatrix x = sample_dataset(chain, 50, 1);
    const Matrix jac = analytic_jacobian_diag(chain, x);
    for (int k = 0; k < 50; ++k) CHECK(jac(k, 1) == doctest::Approx(-2.0));
    CHECK(sample_var(jac.col(0)) > 1e-3);

    for (auto family : {NoiseFamily::Gaussian, NoiseFamily::Gumbel}) {
        for (std::uint64_t seed = 0; seed < 6; ++seed) {
            const ScmModel m = make_model(sample_er_dag(5, 7, seed), LinkKind::Parametric, family, seed);
            const DataMatrix xs = sample_dataset(m, 10, seed + 1);
            CHECK(oracle::max_relative_error(analytic_jacobian_diag(m, xs), fd_jacobian_diag(m, xs)) < 1e-6);
        }
    }
    ScmModel lap = sin_chain(0.5, 0.5, NoiseFamily::Laplace);
    CHECK_THROWS_AS(analytic_jacobian_diag(lap, x), ConfigError);
}

TEST_CASE("leaf characterisation of the Jacobian diagonal") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const int d = 3 + static_cast<int>(seed % 4);
        const Dag g = sample_er_dag(d, d, seed);
        const ScmModel m = make_model(g, LinkKind::Parametric, NoiseFamily::Gaussian, seed);
        const DataMatrix x = sample_dataset(m, 1000, seed);
        const Matrix jac = analytic_jacobian_diag(m, x);
        const std::vector<double> v = order::column_variances(jac);
        for (int j = 0; j < d; ++j) {
            const bool leaf = g.children(j).empty();
            CHECK((v[static_cast<std::size_t>(j)] < 1e-20) == leaf);
        }
        // For a leaf j, d s_j / d x_i varies exactly for the parents i of j.
        const Matrix s = analytic_score(m, x);
        for (int j = 0; j < d; ++j) {
            if (!g.children(j).empty()) continue;
            for (int i = 0; i < d; ++i) {
                if (i == j) continue;
                Matrix cross(x.rows(), 1);
                for (Eigen::Index k = 0; k < x.rows(); ++k) {
                    DataMatrix row = x.row(k);
                    auto f = [&](double t) {
                        DataMatrix r = row;
                        r(0, i) = t;
                        return analytic_score(m, r)(0, j);
                    };
                    cross(k, 0) = oracle::central_first(f, x(k, i), 1e-3);
                }
                const double var = order::column_variances(cross)[0];
                CHECK((var > 1e-8) == g.has_edge(i, j));
            }
        }
    }
}

TEST_CASE("GP-link models have no closed-form oracle") {
    const ScmModel m = make_model(sample_er_dag(4, 4, 1), LinkKind::Gp, NoiseFamily::Gaussian, 1);
    const DataMatrix x = sample_dataset(m, 20, 1);
    CHECK_THROWS_AS(analytic_score(m, x), ConfigError);
    CHECK_THROWS_AS(analytic_jacobian_diag(m, x), ConfigError);
}

TEST_CASE("benchmark suite shape and determinism") {
    BenchmarkConfig cfg;
    cfg.d = 10;
    cfg.runs = 10;
    cfg.n = 200;
    cfg.seed = 42;
    const auto a = benchmark_suite(cfg);
    const auto b = benchmark_suite(cfg);
    REQUIRE(a.size() == 10);
    double edges = 0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        CHECK(a[r].truth.is_acyclic());
        CHECK(a[r].truth == b[r].truth);
        CHECK(a[r].data == b[r].data);
        CHECK(a[r].model.link == LinkKind::Gp);
        edges += static_cast<double>(a[r].truth.edge_count());
    }
    CHECK(edges / 10 == doctest::Approx(10).epsilon(0.35));
    cfg.runs = 0;
    CHECK(benchmark_suite(cfg).empty());
    CHECK(a[0].seed != a[1].seed);
}

TEST_CASE("model validation") {
    ScmModel m = sin_chain(1.0, 1.0);
    m.terms[1][0].a = 0.0;
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m = sin_chain(1.0, -1.0);
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m = sin_chain(1.0, 1.0);
    m.terms[1].clear();
    CHECK_THROWS_AS(m.validate(), ConfigError);
}

TEST_CASE("restricting a model to an ancestral set") {
    const std::pair<int, int> e[] = {{0, 1}, {1, 2}};
    ScmModel m = make_model(Dag::from_edges(3, e), LinkKind::Parametric, NoiseFamily::Gaussian, 1);
    const ScmModel sub = restrict_model(m, {0, 1});
    CHECK(sub.size() == 2);
    CHECK(sub.graph.has_edge(0, 1));
    CHECK_THROWS_AS(restrict_model(m, {1, 2}), ConfigError);
}

TEST_CASE("name parsing") {
    CHECK(parse_graph_kind("ER4") == GraphKind::ER4);
    CHECK(parse_noise_family("gumbel") == NoiseFamily::Gumbel);
    CHECK(parse_link_kind("parametric") == LinkKind::Parametric);
    CHECK_THROWS_AS(parse_graph_kind("ER2"), ConfigError);
}
