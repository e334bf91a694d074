#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "score_dag/bench.hpp"
#include "score_dag/cli.hpp"
#include "score_dag/error.hpp"
#include "score_dag/io.hpp"
#include "score_dag/metrics.hpp"
#include "score_dag/parallel.hpp"
#include "score_dag/prune.hpp"
#include "score_dag/scm.hpp"
#include "score_dag/simd/kernels.hpp"

namespace score_dag::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
    std::uint64_t seed = 0;
    int jobs = 1;
    bool force = false;
};

struct GenerateOptions {
    int d = 10;
    std::string graph = "ER1";
    std::string noise = "gaussian";
    std::string link = "gp";
    int n = 1000;
    std::string data = "data.csv";
    std::string truth = "truth.json";
    std::string model = "model.json";
};

struct DiscoverOptions {
    std::string data;
    double eta = stein::kDefaultEta;
    double cutoff = 0.001;
    int basis_size = 10;
    std::string out = "estimate.json";
    std::string trace;
    std::string order;
};

struct EvalOptions {
    std::string truth;
    std::string est;
    std::string order;
    std::string out;
};

struct BenchOptions {
    int d = 10;
    std::string graph = "ER1";
    std::string noise = "gaussian";
    std::string link = "gp";
    int n = 1000;
    int runs = 10;
    double eta = stein::kDefaultEta;
    double cutoff = 0.001;
    int basis_size = 10;
    std::string out = "bench.json";
    bool resume = false;
};

std::string dump(const io::Json& j) { return j.dump(2) + "\n"; }

int cmd_generate(const GlobalOptions& g, const GenerateOptions& o, std::ostream& out) {
    scm::BenchmarkConfig cfg;
    cfg.d = o.d;
    cfg.graph = scm::parse_graph_kind(o.graph);
    cfg.noise = scm::parse_noise_family(o.noise);
    cfg.link = scm::parse_link_kind(o.link);
    cfg.n = o.n;
    if (cfg.n < 1) throw ConfigError("--n must be >= 1");
    if (!g.force) {
        for (const auto& p : {o.data, o.truth, o.model}) {
            if (fs::exists(p)) throw ConfigError("refusing to overwrite '" + p + "' (use --force)");
        }
    }
    const scm::BenchmarkInstance inst = scm::make_instance(cfg, g.seed);
    io::write_file(o.data, io::write_csv(inst.data), g.force);
    io::write_file(o.truth, dump(io::to_json(inst.truth)), g.force);
    io::write_file(o.model, dump(io::to_json(io::ModelFile{inst.model, g.seed, cfg.n})), g.force);
    out << "wrote " << inst.data.rows() << "x" << inst.data.cols() << " dataset to " << o.data << ", "
        << inst.truth.edge_count() << "-edge graph to " << o.truth << ", model to " << o.model << "\n";
    return 0;
}

int cmd_discover(const GlobalOptions& g, const DiscoverOptions& o, std::ostream& out) {
    prune::PruneConfig cfg;
    cfg.cutoff = o.cutoff;
    cfg.basis_size = o.basis_size;
    cfg.validate();
    if (!g.force) {
        for (const auto& p : {o.out, o.trace, o.order}) {
            if (!p.empty() && fs::exists(p)) throw ConfigError("refusing to overwrite '" + p + "' (use --force)");
        }
    }
    const DataMatrix x = io::read_csv(io::read_file(o.data));
    const prune::Discovery found = prune::discover(x, o.eta, cfg);
    io::write_file(o.out, dump(io::to_json(found.graph)), g.force);
    if (!o.trace.empty()) io::write_file(o.trace, dump(io::to_json(found.trace)), g.force);
    if (!o.order.empty()) io::write_file(o.order, dump(io::to_json(found.trace.order)), g.force);
    out << "order:";
    for (int v : found.trace.order.nodes()) out << ' ' << v;
    out << "\nedges: " << found.graph.edge_count() << "\n";
    out << "time: order " << found.order_seconds << " s, total " << found.total_seconds << " s ("
        << simd::isa_name(simd::active_ops().isa) << " kernels)\n";
    for (const auto& w : found.warnings) {
        out << "warning: node " << w.node << (w.covariate >= 0 ? ", covariate " + std::to_string(w.covariate) : "")
            << ": " << w.message << "\n";
    }
    return 0;
}

int cmd_eval(const GlobalOptions& g, const EvalOptions& o, std::ostream& out) {
    const Dag truth = io::dag_from_json(io::read_json_file(o.truth));
    const Dag est = io::dag_from_json(io::read_json_file(o.est));
    std::optional<TopoOrder> order;
    if (!o.order.empty()) order = io::order_from_json(io::read_json_file(o.order));
    const metrics::MetricReport report = metrics::evaluate(truth, est, order);
    const std::string text = io::to_json(report).dump() + "\n";
    if (!o.out.empty()) io::write_file(o.out, text, g.force);
    out << text;
    return 0;
}

int cmd_bench(const GlobalOptions& g, const BenchOptions& o, std::ostream& out) {
    BenchConfig cfg;
    cfg.suite.d = o.d;
    cfg.suite.graph = scm::parse_graph_kind(o.graph);
    cfg.suite.noise = scm::parse_noise_family(o.noise);
    cfg.suite.link = scm::parse_link_kind(o.link);
    cfg.suite.n = o.n;
    cfg.suite.runs = o.runs;
    cfg.suite.seed = g.seed;
    cfg.eta = o.eta;
    cfg.prune.cutoff = o.cutoff;
    cfg.prune.basis_size = o.basis_size;
    cfg.jobs = g.jobs;
    cfg.prune.validate();
    if (o.runs < 0) throw ConfigError("--runs must be non-negative");
    if (o.n < 2) throw ConfigError("--n must be >= 2");
    // Surface graph-parameter errors before any work.
    (void)scm::sample_graph(cfg.suite.graph, cfg.suite.d, 0);

    std::vector<BenchRow> existing;
    if (fs::exists(o.out)) {
        if (o.resume) {
            const BenchResult prior = bench_from_json(io::read_json_file(o.out));
            const auto& a = prior.config;
            const bool same = a.suite.d == cfg.suite.d && a.suite.graph == cfg.suite.graph &&
                              a.suite.noise == cfg.suite.noise && a.suite.link == cfg.suite.link &&
                              a.suite.n == cfg.suite.n && a.suite.seed == cfg.suite.seed && a.eta == cfg.eta &&
                              a.prune.cutoff == cfg.prune.cutoff && a.prune.basis_size == cfg.prune.basis_size;
            if (!same) throw ConfigError("--resume: '" + o.out + "' was produced with a different configuration");
            existing = prior.rows;
        } else if (!g.force) {
            throw ConfigError("refusing to overwrite '" + o.out + "' (use --force or --resume)");
        }
    }
    auto flush = [&](const BenchResult& partial) { io::write_file(o.out, dump(to_json(partial)), true); };
    const BenchResult result = run_bench(cfg, existing, flush);
    flush(result);
    out << format_table(result);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal order search from the score's Jacobian, with synthetic benchmarks"};
    app.require_subcommand(1);
    GlobalOptions global;
    app.add_option("--seed", global.seed, "RNG seed");
    app.add_option("--jobs", global.jobs, "Parallel benchmark workers")->check(CLI::PositiveNumber);
    app.add_flag("--force", global.force, "Overwrite existing output files");
    app.set_version_flag("--version", "score_dag 0.1.0");

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Sample a synthetic additive-noise dataset");
    g->add_option("--d", gen.d, "Number of nodes");
    g->add_option("--graph", gen.graph, "ER1 | ER4 | SF1 | SF4");
    g->add_option("--noise", gen.noise, "gaussian | laplace | gumbel");
    g->add_option("--link", gen.link, "gp | parametric");
    g->add_option("--n", gen.n, "Number of samples");
    g->add_option("--data", gen.data, "Output dataset CSV");
    g->add_option("--truth", gen.truth, "Output true-graph JSON");
    g->add_option("--model", gen.model, "Output model JSON");

    DiscoverOptions disc;
    auto* d = app.add_subcommand("discover", "Estimate a DAG from a dataset CSV");
    d->add_option("--data", disc.data, "Input dataset CSV")->required();
    d->add_option("--eta", disc.eta, "Ridge regularizer of the Stein estimators");
    d->add_option("--cutoff", disc.cutoff, "Pruning significance level");
    d->add_option("--basis-size", disc.basis_size, "Spline functions per covariate when pruning");
    d->add_option("--out", disc.out, "Output graph JSON");
    d->add_option("--trace", disc.trace, "Optional order-search trace JSON");
    d->add_option("--order", disc.order, "Optional order JSON");

    EvalOptions ev;
    auto* e = app.add_subcommand("eval", "Compare an estimated graph against the truth");
    e->add_option("--truth", ev.truth, "True graph JSON")->required();
    e->add_option("--est", ev.est, "Estimated graph JSON")->required();
    e->add_option("--order", ev.order, "Order or trace JSON; enables d_top");
    e->add_option("--out", ev.out, "Output metric report JSON");

    BenchOptions be;
    auto* b = app.add_subcommand("bench", "Run the full pipeline on fresh synthetic models");
    b->add_option("--d", be.d, "Number of nodes");
    b->add_option("--graph", be.graph, "ER1 | ER4 | SF1 | SF4");
    b->add_option("--noise", be.noise, "gaussian | laplace | gumbel");
    b->add_option("--link", be.link, "gp | parametric");
    b->add_option("--n", be.n, "Samples per run");
    b->add_option("--runs", be.runs, "Independent runs");
    b->add_option("--eta", be.eta, "Ridge regularizer of the Stein estimators");
    b->add_option("--cutoff", be.cutoff, "Pruning significance level");
    b->add_option("--basis-size", be.basis_size, "Spline functions per covariate when pruning");
    b->add_option("--out", be.out, "Output BenchResult JSON");
    b->add_flag("--resume", be.resume, "Continue an interrupted benchmark stored in --out");
    // Global flags are also accepted after the subcommand name.
    for (auto* sub : {g, d, e, b}) {
        sub->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << "score_dag 0.1.0\n";
        return 0;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }

    try {
        if (*g) return cmd_generate(global, gen, out);
        if (*d) return cmd_discover(global, disc, out);
        if (*e) return cmd_eval(global, ev, out);
        if (*b) return cmd_bench(global, be, out);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << "\n";
        return ex.exit_code();
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return static_cast<int>(ErrorKind::Numerical);
    }
    err << "error: no subcommand\n";
    return 1;
}

}  // namespace score_dag::cli
