#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "score_dag/dag.hpp"
#include "score_dag/matrix.hpp"

namespace score_dag::scm {

enum class NoiseFamily { Gaussian, Laplace, Gumbel };
enum class LinkKind { Gp, Parametric };
enum class GraphKind { ER1, ER4, SF1, SF4 };

std::string_view to_string(NoiseFamily f);
std::string_view to_string(LinkKind k);
std::string_view to_string(GraphKind k);
NoiseFamily parse_noise_family(std::string_view s);
LinkKind parse_link_kind(std::string_view s);
GraphKind parse_graph_kind(std::string_view s);

/// Zero-mean additive noise with the given variance. Laplace scale is
/// sigma/sqrt(2); Gumbel scale is sigma*sqrt(6)/pi, shifted by -scale*gamma.
struct NoiseSpec {
    NoiseFamily family = NoiseFamily::Gaussian;
    double variance = 0.5;
};

/// a*sin(b*x_parent) + c*tanh(e*x_parent).
struct ParametricTerm {
    int parent = 0;
    double a = 0.0, b = 0.0, c = 0.0, e = 0.0;

    double value(double x) const;
    double first(double x) const;
    double second(double x) const;
};

/// x_i = f_i(pa_i(x)) + eps_i. Root nodes have f_i == 0.
struct ScmModel {
    Dag graph;
    LinkKind link = LinkKind::Gp;
    std::vector<NoiseSpec> noise;                     // one per node
    std::vector<std::vector<ParametricTerm>> terms;   // parametric links only, one list per node
    double gp_bandwidth = 1.0;
    double gp_jitter = 1e-6;

    int size() const noexcept { return graph.size(); }
    /// Throws ConfigError when the model violates its invariants.
    void validate() const;
};

/// Draws noise variances ~ U[0.4, 0.8] and, for parametric links, one
/// sin/tanh term per parent with magnitudes ~ U[0.5, 2] and random signs.
ScmModel make_model(const Dag& graph, LinkKind link, NoiseFamily noise, std::uint64_t seed);

Dag sample_graph(GraphKind kind, int d, std::uint64_t seed);

/// n samples, nodes generated in topological order. GP links are one joint
/// draw of the n link values per node from N(0, K_rbf + jitter I).
DataMatrix sample_dataset(const ScmModel& model, int n, std::uint64_t seed);

/// Closed-form grad log p at every row of x (parametric links only). For
/// Laplace noise the derivative at an exactly-zero residual is taken from
/// the right.
Matrix analytic_score(const ScmModel& model, const DataMatrix& x);

/// Closed-form d s_j / d x_j at every row (parametric links, Gaussian or
/// Gumbel noise).
Matrix analytic_jacobian_diag(const ScmModel& model, const DataMatrix& x);

/// Summed log-density of each row (parametric links). Used by the
/// finite-difference oracles.
Vector log_density(const ScmModel& model, const DataMatrix& x);

/// Marginal model over `nodes` (given in their new index order). The set must
/// be ancestrally closed: every parent of a kept node is kept.
ScmModel restrict_model(const ScmModel& model, const std::vector<int>& nodes);

struct BenchmarkConfig {
    int d = 10;
    GraphKind graph = GraphKind::ER1;
    NoiseFamily noise = NoiseFamily::Gaussian;
    LinkKind link = LinkKind::Gp;
    int n = 1000;
    int runs = 10;
    std::uint64_t seed = 0;
};

struct BenchmarkInstance {
    ScmModel model;
    DataMatrix data;
    Dag truth;
    std::uint64_t seed = 0;  // the derived per-run seed
};

std::uint64_t run_seed(std::uint64_t base, int run);

/// One instance from its per-run seed.
BenchmarkInstance make_instance(const BenchmarkConfig& cfg, std::uint64_t instance_seed);

std::vector<BenchmarkInstance> benchmark_suite(const BenchmarkConfig& cfg);

}  // namespace score_dag::scm
