#include "score_dag/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "score_dag/error.hpp"
#include "score_dag/metrics.hpp"
#include "score_dag/order.hpp"

namespace score_dag::cli {
namespace {

using Json = nlohmann::json;

struct FieldDef {
    const char* name;
    double (*get)(const BenchRow&);
};

constexpr FieldDef kFields[] = {
    {"shd", [](const BenchRow& r) { return static_cast<double>(r.shd); }},
    {"sid", [](const BenchRow& r) { return static_cast<double>(r.sid); }},
    {"d_top", [](const BenchRow& r) { return static_cast<double>(r.d_top); }},
    {"varsort_d_top", [](const BenchRow& r) { return static_cast<double>(r.varsort_d_top); }},
    {"order_seconds", [](const BenchRow& r) { return r.order_seconds; }},
    {"total_seconds", [](const BenchRow& r) { return r.total_seconds; }},
};

Json config_json(const BenchConfig& c) {
    return Json{{"d", c.suite.d},
                {"graph", scm::to_string(c.suite.graph)},
                {"noise", scm::to_string(c.suite.noise)},
                {"link", scm::to_string(c.suite.link)},
                {"n", c.suite.n},
                {"runs", c.suite.runs},
                {"seed", c.suite.seed},
                {"eta", c.eta},
                {"cutoff", c.prune.cutoff},
                {"basis_size", c.prune.basis_size}};
}

}  // namespace

Summary BenchResult::summarize(const std::function<double(const BenchRow&)>& field) const {
    Summary s;
    if (rows.empty()) return s;
    double total = 0.0;
    for (const auto& r : rows) total += field(r);
    s.mean = total / static_cast<double>(rows.size());
    if (rows.size() > 1) {
        double ss = 0.0;
        for (const auto& r : rows) ss += (field(r) - s.mean) * (field(r) - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(rows.size() - 1));
    }
    return s;
}

BenchRow run_single(const BenchConfig& cfg, int run) {
    BenchRow row;
    row.run = run;
    row.seed = scm::run_seed(cfg.suite.seed, run);
    const scm::BenchmarkInstance inst = scm::make_instance(cfg.suite, row.seed);
    const prune::Discovery found = prune::discover(inst.data, cfg.eta, cfg.prune);
    row.shd = metrics::shd(inst.truth, found.graph);
    row.sid = metrics::sid(inst.truth, found.graph);
    row.d_top = metrics::d_top(found.trace.order, inst.truth);
    row.varsort_d_top = metrics::d_top(order::var_sort_order(inst.data), inst.truth);
    row.true_edges = static_cast<int>(inst.truth.edge_count());
    row.est_edges = static_cast<int>(found.graph.edge_count());
    row.order_seconds = found.order_seconds;
    row.total_seconds = found.total_seconds;
    return row;
}

BenchResult run_bench(const BenchConfig& cfg, std::vector<BenchRow> existing,
                      const std::function<void(const BenchResult&)>& on_row) {
    cfg.prune.validate();
    if (cfg.suite.runs < 0) throw ConfigError("runs must be non-negative");
    BenchResult result;
    result.config = cfg;
    std::set<int> done;
    for (auto& r : existing) {
        if (r.run >= 0 && r.run < cfg.suite.runs && done.insert(r.run).second) result.rows.push_back(r);
    }
    std::vector<int> todo;
    for (int run = 0; run < cfg.suite.runs; ++run) {
        if (!done.count(run)) todo.push_back(run);
    }

    std::mutex mu;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    auto worker = [&] {
        while (true) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= todo.size()) return;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (failure) return;
            }
            try {
                BenchRow row = run_single(cfg, todo[slot]);
                std::lock_guard<std::mutex> lock(mu);
                result.rows.push_back(row);
                std::sort(result.rows.begin(), result.rows.end(),
                          [](const BenchRow& a, const BenchRow& b) { return a.run < b.run; });
                if (on_row) on_row(result);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    const int workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(todo.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    std::sort(result.rows.begin(), result.rows.end(), [](const BenchRow& a, const BenchRow& b) { return a.run < b.run; });
    return result;
}

Json to_json(const BenchResult& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back(Json{{"run", row.run},
                            {"seed", row.seed},
                            {"shd", row.shd},
                            {"sid", row.sid},
                            {"d_top", row.d_top},
                            {"varsort_d_top", row.varsort_d_top},
                            {"true_edges", row.true_edges},
                            {"est_edges", row.est_edges},
                            {"order_seconds", row.order_seconds},
                            {"total_seconds", row.total_seconds}});
    }
    Json aggregate = Json::object();
    for (const auto& f : kFields) {
        const Summary s = r.summarize(f.get);
        aggregate[f.name] = Json{{"mean", s.mean}, {"std", s.stddev}};
    }
    return Json{{"config", config_json(r.config)}, {"rows", rows}, {"aggregate", aggregate}};
}

BenchResult bench_from_json(const Json& j) {
    try {
        BenchResult r;
        const Json& c = j.at("config");
        r.config.suite.d = c.at("d").get<int>();
        r.config.suite.graph = scm::parse_graph_kind(c.at("graph").get<std::string>());
        r.config.suite.noise = scm::parse_noise_family(c.at("noise").get<std::string>());
        r.config.suite.link = scm::parse_link_kind(c.at("link").get<std::string>());
        r.config.suite.n = c.at("n").get<int>();
        r.config.suite.runs = c.at("runs").get<int>();
        r.config.suite.seed = c.at("seed").get<std::uint64_t>();
        r.config.eta = c.at("eta").get<double>();
        r.config.prune.cutoff = c.at("cutoff").get<double>();
        r.config.prune.basis_size = c.at("basis_size").get<int>();
        for (const auto& row : j.at("rows")) {
            BenchRow b;
            b.run = row.at("run").get<int>();
            b.seed = row.at("seed").get<std::uint64_t>();
            b.shd = row.at("shd").get<int>();
            b.sid = row.at("sid").get<int>();
            b.d_top = row.at("d_top").get<int>();
            b.varsort_d_top = row.at("varsort_d_top").get<int>();
            b.true_edges = row.at("true_edges").get<int>();
            b.est_edges = row.at("est_edges").get<int>();
            b.order_seconds = row.at("order_seconds").get<double>();
            b.total_seconds = row.at("total_seconds").get<double>();
            r.rows.push_back(b);
        }
        const Json& agg = j.at("aggregate");
        for (const auto& f : kFields) {
            const Summary s = r.summarize(f.get);
            const double mean = agg.at(f.name).at("mean").get<double>();
            const double sd = agg.at(f.name).at("std").get<double>();
            const double tol = 1e-9 * (1.0 + std::abs(s.mean) + s.stddev);
            if (std::abs(mean - s.mean) > tol || std::abs(sd - s.stddev) > tol) {
                throw DataError(std::string("bench result aggregate for '") + f.name + "' does not match its rows");
            }
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed bench result JSON: ") + e.what());
    }
}

std::string format_table(const BenchResult& r) {
    std::ostringstream out;
    const auto& s = r.config.suite;
    out << "SCORE bench: d=" << s.d << " graph=" << scm::to_string(s.graph) << " noise=" << scm::to_string(s.noise)
        << " link=" << scm::to_string(s.link) << " n=" << s.n << " runs=" << r.rows.size() << "/" << s.runs
        << " seed=" << s.seed << "\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%4s %6s %6s %6s %9s %10s %10s\n", "run", "SHD", "SID", "D_top", "VarSort",
                  "order[s]", "total[s]");
    out << line;
    for (const auto& row : r.rows) {
        std::snprintf(line, sizeof(line), "%4d %6d %6d %6d %9d %10.3f %10.3f\n", row.run, row.shd, row.sid,
                      row.d_top, row.varsort_d_top, row.order_seconds, row.total_seconds);
        out << line;
    }
    out << "mean +- std:";
    for (const auto& f : kFields) {
        const Summary sm = r.summarize(f.get);
        std::snprintf(line, sizeof(line), "  %s %.2f +- %.2f", f.name, sm.mean, sm.stddev);
        out << line;
    }
    out << "\n";
    return out.str();
}

}  // namespace score_dag::cli
