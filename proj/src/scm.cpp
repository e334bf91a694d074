#include "score_dag/scm.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "score_dag/error.hpp"
#include "score_dag/kernel.hpp"
#include "score_dag/random.hpp"

namespace score_dag::scm {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

double laplace_scale(double variance) { return std::sqrt(variance / 2.0); }
double gumbel_scale(double variance) { return std::sqrt(variance) * std::sqrt(6.0) / std::numbers::pi; }

double sample_noise(const NoiseSpec& spec, Rng& rng) {
    switch (spec.family) {
        case NoiseFamily::Gaussian:
            return std::normal_distribution<double>(0.0, std::sqrt(spec.variance))(rng);
        case NoiseFamily::Laplace: {
            const double b = laplace_scale(spec.variance);
            double u = uniform01(rng) - 0.5;
            while (u == -0.5) u = uniform01(rng) - 0.5;
            return -b * (u < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(u));
        }
        case NoiseFamily::Gumbel: {
            const double beta = gumbel_scale(spec.variance);
            double u = uniform01(rng);
            while (u == 0.0) u = uniform01(rng);
            return -beta * std::log(-std::log(u)) - beta * kEulerGamma;
        }
    }
    throw ConfigError("unknown noise family");
}

// d log p_eps / d r
double noise_score(const NoiseSpec& spec, double r) {
    switch (spec.family) {
        case NoiseFamily::Gaussian:
            return -r / spec.variance;
        case NoiseFamily::Laplace:
            return (r < 0.0 ? 1.0 : -1.0) / laplace_scale(spec.variance);
        case NoiseFamily::Gumbel: {
            const double beta = gumbel_scale(spec.variance);
            const double z = (r + beta * kEulerGamma) / beta;
            return (std::exp(-z) - 1.0) / beta;
        }
    }
    throw ConfigError("unknown noise family");
}

// d^2 log p_eps / d r^2
double noise_score_derivative(const NoiseSpec& spec, double r) {
    switch (spec.family) {
        case NoiseFamily::Gaussian:
            return -1.0 / spec.variance;
        case NoiseFamily::Laplace:
            throw ConfigError("Laplace log-density is not twice differentiable; Jacobian oracle unavailable");
        case NoiseFamily::Gumbel: {
            const double beta = gumbel_scale(spec.variance);
            const double z = (r + beta * kEulerGamma) / beta;
            return -std::exp(-z) / (beta * beta);
        }
    }
    throw ConfigError("unknown noise family");
}

double noise_log_density(const NoiseSpec& spec, double r) {
    switch (spec.family) {
        case NoiseFamily::Gaussian:
            return -0.5 * r * r / spec.variance - 0.5 * std::log(2.0 * std::numbers::pi * spec.variance);
        case NoiseFamily::Laplace: {
            const double b = laplace_scale(spec.variance);
            return -std::abs(r) / b - std::log(2.0 * b);
        }
        case NoiseFamily::Gumbel: {
            const double beta = gumbel_scale(spec.variance);
            const double z = (r + beta * kEulerGamma) / beta;
            return -z - std::exp(-z) - std::log(beta);
        }
    }
    throw ConfigError("unknown noise family");
}

void require_parametric(const ScmModel& model, const DataMatrix& x, const char* what) {
    model.validate();
    if (model.link != LinkKind::Parametric) {
        throw ConfigError(std::string(what) + " needs parametric links; GP links have no closed form");
    }
    if (x.cols() != model.size()) {
        throw DataError(std::string(what) + ": data has " + std::to_string(x.cols()) +
                        " columns but the model has " + std::to_string(model.size()) + " nodes");
    }
}

// Residuals r_i = x_i - f_i(pa_i(x)), n x d.
Matrix residuals(const ScmModel& model, const DataMatrix& x) {
    Matrix r = x;
    for (int i = 0; i < model.size(); ++i) {
        for (const auto& t : model.terms[static_cast<std::size_t>(i)]) {
            for (Eigen::Index k = 0; k < x.rows(); ++k) r(k, i) -= t.value(x(k, t.parent));
        }
    }
    return r;
}

}  // namespace

std::string_view to_string(NoiseFamily f) {
    switch (f) {
        case NoiseFamily::Gaussian: return "gaussian";
        case NoiseFamily::Laplace: return "laplace";
        case NoiseFamily::Gumbel: return "gumbel";
    }
    return "?";
}

std::string_view to_string(LinkKind k) { return k == LinkKind::Gp ? "gp" : "parametric"; }

std::string_view to_string(GraphKind k) {
    switch (k) {
        case GraphKind::ER1: return "ER1";
        case GraphKind::ER4: return "ER4";
        case GraphKind::SF1: return "SF1";
        case GraphKind::SF4: return "SF4";
    }
    return "?";
}

NoiseFamily parse_noise_family(std::string_view s) {
    if (s == "gaussian") return NoiseFamily::Gaussian;
    if (s == "laplace") return NoiseFamily::Laplace;
    if (s == "gumbel") return NoiseFamily::Gumbel;
    throw ConfigError("unknown noise family '" + std::string(s) + "' (gaussian|laplace|gumbel)");
}

LinkKind parse_link_kind(std::string_view s) {
    if (s == "gp") return LinkKind::Gp;
    if (s == "parametric") return LinkKind::Parametric;
    throw ConfigError("unknown link kind '" + std::string(s) + "' (gp|parametric)");
}

GraphKind parse_graph_kind(std::string_view s) {
    if (s == "ER1") return GraphKind::ER1;
    if (s == "ER4") return GraphKind::ER4;
    if (s == "SF1") return GraphKind::SF1;
    if (s == "SF4") return GraphKind::SF4;
    throw ConfigError("unknown graph kind '" + std::string(s) + "' (ER1|ER4|SF1|SF4)");
}

double ParametricTerm::value(double x) const { return a * std::sin(b * x) + c * std::tanh(e * x); }

double ParametricTerm::first(double x) const {
    const double t = std::tanh(e * x);
    return a * b * std::cos(b * x) + c * e * (1.0 - t * t);
}

double ParametricTerm::second(double x) const {
    const double t = std::tanh(e * x);
    return -a * b * b * std::sin(b * x) - 2.0 * c * e * e * t * (1.0 - t * t);
}

void ScmModel::validate() const {
    const auto d = static_cast<std::size_t>(graph.size());
    if (noise.size() != d) {
        throw ConfigError("model has " + std::to_string(noise.size()) + " noise specs for " +
                          std::to_string(d) + " nodes");
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (!(noise[i].variance > 0.0) || !std::isfinite(noise[i].variance)) {
            throw ConfigError("noise variance of node " + std::to_string(i) + " must be positive");
        }
    }
    if (!graph.is_acyclic()) throw CycleError(-1, "model graph is cyclic");
    if (link == LinkKind::Parametric) {
        if (terms.size() != d) throw ConfigError("parametric model needs one term list per node");
        for (std::size_t i = 0; i < d; ++i) {
            const std::vector<int> pa = graph.parents(static_cast<int>(i));
            std::vector<char> covered(d, 0);
            for (const auto& t : terms[i]) {
                if (t.parent < 0 || static_cast<std::size_t>(t.parent) >= d ||
                    !graph.has_edge(t.parent, static_cast<int>(i))) {
                    throw ConfigError("link term of node " + std::to_string(i) + " references non-parent " +
                                      std::to_string(t.parent));
                }
                const bool nonlinear = (t.a != 0.0 && t.b != 0.0) || (t.c != 0.0 && t.e != 0.0);
                if (!nonlinear) {
                    throw ConfigError("link term of node " + std::to_string(i) + " is identically zero");
                }
                covered[static_cast<std::size_t>(t.parent)] = 1;
            }
            for (int p : pa) {
                if (!covered[static_cast<std::size_t>(p)]) {
                    throw ConfigError("parent " + std::to_string(p) + " of node " + std::to_string(i) +
                                      " has no link term");
                }
            }
        }
    } else if (!(gp_bandwidth > 0.0) || !(gp_jitter > 0.0)) {
        throw ConfigError("GP bandwidth and jitter must be positive");
    }
}

ScmModel make_model(const Dag& graph, LinkKind link, NoiseFamily noise, std::uint64_t seed) {
    ScmModel model;
    model.graph = graph;
    model.link = link;
    Rng rng(derive_seed(seed, 0x6d6f64656cULL));
    std::uniform_real_distribution<double> variance(0.4, 0.8);
    std::uniform_real_distribution<double> magnitude(0.5, 2.0);
    auto signed_coef = [&] { return (uniform01(rng) < 0.5 ? -1.0 : 1.0) * magnitude(rng); };
    const int d = graph.size();
    model.noise.resize(static_cast<std::size_t>(d));
    for (auto& spec : model.noise) spec = NoiseSpec{noise, variance(rng)};
    model.terms.resize(static_cast<std::size_t>(d));
    if (link == LinkKind::Parametric) {
        for (int i = 0; i < d; ++i) {
            for (int p : graph.parents(i)) {
                ParametricTerm t;
                t.parent = p;
                t.a = signed_coef();
                t.b = signed_coef();
                t.c = signed_coef();
                t.e = signed_coef();
                model.terms[static_cast<std::size_t>(i)].push_back(t);
            }
        }
    }
    return model;
}

Dag sample_graph(GraphKind kind, int d, std::uint64_t seed) {
    switch (kind) {
        case GraphKind::ER1: return sample_er_dag(d, d, seed);
        case GraphKind::ER4: return sample_er_dag(d, 4 * d, seed);
        case GraphKind::SF1: return sample_sf_dag(d, 1, seed);
        case GraphKind::SF4: return sample_sf_dag(d, 4, seed);
    }
    throw ConfigError("unknown graph kind");
}

DataMatrix sample_dataset(const ScmModel& model, int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("sample count must be >= 1, got " + std::to_string(n));
    model.validate();
    const int d = model.size();
    DataMatrix x = DataMatrix::Zero(n, d);
    const TopoOrder order = topological_sort(model.graph);
    for (int node : order.nodes()) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(node)));
        const std::vector<int> pa = model.graph.parents(node);
        auto col = x.col(node);
        if (!pa.empty()) {
            if (model.link == LinkKind::Parametric) {
                for (const auto& t : model.terms[static_cast<std::size_t>(node)]) {
                    for (int k = 0; k < n; ++k) col(k) += t.value(x(k, t.parent));
                }
            } else {
                DataMatrix inputs(n, static_cast<Eigen::Index>(pa.size()));
                for (std::size_t c = 0; c < pa.size(); ++c) inputs.col(static_cast<Eigen::Index>(c)) = x.col(pa[c]);
                Matrix cov = kernel::build_context(inputs, model.gp_bandwidth).gram;
                const double diag_mean = cov.diagonal().mean();
                double jitter = model.gp_jitter * diag_mean;
                Eigen::LLT<Matrix> llt;
                while (true) {
                    Matrix jittered = cov;
                    jittered.diagonal().array() += jitter;
                    llt.compute(jittered);
                    if (llt.info() == Eigen::Success) break;
                    jitter *= 10.0;
                    if (jitter > 1e-2 * diag_mean * (1.0 + 1e-9)) {
                        throw NumericalError("GP covariance factorization failed for node " +
                                             std::to_string(node) + " even with jitter 1e-2");
                    }
                }
                Vector u(n);
                std::normal_distribution<double> std_normal(0.0, 1.0);
                for (int k = 0; k < n; ++k) u(k) = std_normal(rng);
                col += llt.matrixL() * u;
            }
        }
        const NoiseSpec& spec = model.noise[static_cast<std::size_t>(node)];
        for (int k = 0; k < n; ++k) col(k) += sample_noise(spec, rng);
    }
    if (!x.allFinite()) throw NumericalError("generated data contains non-finite values");
    return x;
}

Matrix analytic_score(const ScmModel& model, const DataMatrix& x) {
    require_parametric(model, x, "analytic_score");
    const Matrix r = residuals(model, x);
    const int d = model.size();
    Matrix s(x.rows(), d);
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        for (int j = 0; j < d; ++j) s(k, j) = noise_score(model.noise[static_cast<std::size_t>(j)], r(k, j));
        for (int i = 0; i < d; ++i) {
            const double phi_i = noise_score(model.noise[static_cast<std::size_t>(i)], r(k, i));
            for (const auto& t : model.terms[static_cast<std::size_t>(i)]) {
                s(k, t.parent) -= t.first(x(k, t.parent)) * phi_i;
            }
        }
    }
    return s;
}

Matrix analytic_jacobian_diag(const ScmModel& model, const DataMatrix& x) {
    require_parametric(model, x, "analytic_jacobian_diag");
    const Matrix r = residuals(model, x);
    const int d = model.size();
    Matrix jac(x.rows(), d);
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        for (int j = 0; j < d; ++j) {
            jac(k, j) = noise_score_derivative(model.noise[static_cast<std::size_t>(j)], r(k, j));
        }
        for (int i = 0; i < d; ++i) {
            const NoiseSpec& spec = model.noise[static_cast<std::size_t>(i)];
            const double phi = noise_score(spec, r(k, i));
            const double dphi = noise_score_derivative(spec, r(k, i));
            for (const auto& t : model.terms[static_cast<std::size_t>(i)]) {
                const double xp = x(k, t.parent);
                const double f1 = t.first(xp);
                jac(k, t.parent) -= t.second(xp) * phi - f1 * f1 * dphi;
            }
        }
    }
    return jac;
}

Vector log_density(const ScmModel& model, const DataMatrix& x) {
    require_parametric(model, x, "log_density");
    const Matrix r = residuals(model, x);
    Vector out = Vector::Zero(x.rows());
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        for (int i = 0; i < model.size(); ++i) {
            out(k) += noise_log_density(model.noise[static_cast<std::size_t>(i)], r(k, i));
        }
    }
    return out;
}

ScmModel restrict_model(const ScmModel& model, const std::vector<int>& nodes) {
    const int d = model.size();
    std::vector<int> new_index(static_cast<std::size_t>(d), -1);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const int v = nodes[k];
        if (v < 0 || v >= d || new_index[static_cast<std::size_t>(v)] != -1) {
            throw ConfigError("restrict_model: invalid or repeated node " + std::to_string(v));
        }
        new_index[static_cast<std::size_t>(v)] = static_cast<int>(k);
    }
    ScmModel out;
    out.link = model.link;
    out.gp_bandwidth = model.gp_bandwidth;
    out.gp_jitter = model.gp_jitter;
    out.graph = Dag(static_cast<int>(nodes.size()));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const int v = nodes[k];
        for (int p : model.graph.parents(v)) {
            if (new_index[static_cast<std::size_t>(p)] < 0) {
                throw ConfigError("restrict_model: node set is not ancestrally closed (parent " +
                                  std::to_string(p) + " of " + std::to_string(v) + " dropped)");
            }
            out.graph.set_edge(new_index[static_cast<std::size_t>(p)], static_cast<int>(k));
        }
        out.noise.push_back(model.noise[static_cast<std::size_t>(v)]);
        std::vector<ParametricTerm> terms;
        if (static_cast<std::size_t>(v) < model.terms.size()) {
            for (ParametricTerm t : model.terms[static_cast<std::size_t>(v)]) {
                t.parent = new_index[static_cast<std::size_t>(t.parent)];
                terms.push_back(t);
            }
        }
        out.terms.push_back(std::move(terms));
    }
    return out;
}

std::uint64_t run_seed(std::uint64_t base, int run) {
    return derive_seed(base, 0x72756e0000000000ULL + static_cast<std::uint64_t>(run));
}

BenchmarkInstance make_instance(const BenchmarkConfig& cfg, std::uint64_t instance_seed) {
    BenchmarkInstance inst;
    inst.seed = instance_seed;
    inst.truth = sample_graph(cfg.graph, cfg.d, derive_seed(instance_seed, 1));
    inst.model = make_model(inst.truth, cfg.link, cfg.noise, derive_seed(instance_seed, 2));
    inst.data = sample_dataset(inst.model, cfg.n, derive_seed(instance_seed, 3));
    return inst;
}

std::vector<BenchmarkInstance> benchmark_suite(const BenchmarkConfig& cfg) {
    if (cfg.runs < 0) throw ConfigError("runs must be non-negative");
    std::vector<BenchmarkInstance> out;
    out.reserve(static_cast<std::size_t>(cfg.runs));
    for (int run = 0; run < cfg.runs; ++run) out.push_back(make_instance(cfg, run_seed(cfg.seed, run)));
    return out;
}

}  // namespace score_dag::scm
