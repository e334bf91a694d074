#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "score_dag/prune.hpp"
#include "score_dag/scm.hpp"

namespace score_dag::cli {

struct BenchConfig {
    scm::BenchmarkConfig suite;
    double eta = stein::kDefaultEta;
    prune::PruneConfig prune;
    int jobs = 1;
};

struct BenchRow {
    int run = 0;
    std::uint64_t seed = 0;
    int shd = 0;
    int sid = 0;
    int d_top = 0;
    int varsort_d_top = 0;
    int true_edges = 0;
    int est_edges = 0;
    double order_seconds = 0.0;
    double total_seconds = 0.0;
};

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for fewer than 2 rows
};

struct BenchResult {
    BenchConfig config;
    std::vector<BenchRow> rows;  // sorted by run index

    Summary summarize(const std::function<double(const BenchRow&)>& field) const;
};

BenchRow run_single(const BenchConfig& cfg, int run);

/// Runs every missing run index in [0, runs) on a pool of cfg.jobs workers.
/// `existing` supplies already-completed rows (resume); `on_row` is called,
/// serialized, after every finished run with the rows collected so far.
BenchResult run_bench(const BenchConfig& cfg, std::vector<BenchRow> existing = {},
                      const std::function<void(const BenchResult&)>& on_row = {});

nlohmann::json to_json(const BenchResult& r);
/// Throws DataError if the stored aggregate disagrees with the rows.
BenchResult bench_from_json(const nlohmann::json& j);

std::string format_table(const BenchResult& r);

}  // namespace score_dag::cli
