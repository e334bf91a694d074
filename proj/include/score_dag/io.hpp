#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "score_dag/dag.hpp"
#include "score_dag/matrix.hpp"
#include "score_dag/metrics.hpp"
#include "score_dag/order.hpp"
#include "score_dag/scm.hpp"

namespace score_dag::io {

using Json = nlohmann::json;

// Dataset CSV: header x0,...,x{d-1}, then one sample per line with
// shortest round-trip double formatting.
std::string write_csv(const DataMatrix& x);
/// Throws DataError naming the 1-based line of any ragged, non-numeric or
/// non-finite record. A first line that is not numeric is taken as the header.
DataMatrix read_csv(const std::string& text);

// Graph JSON: {"d": int, "edges": [[i, j], ...]} with edges sorted.
Json to_json(const Dag& g);
Dag dag_from_json(const Json& j);

Json to_json(const TopoOrder& order);
TopoOrder order_from_json(const Json& j);

// {"shd": int, "sid": int, "d_top": int | null}
Json to_json(const metrics::MetricReport& r);
metrics::MetricReport report_from_json(const Json& j);

Json to_json(const order::OrderTrace& trace);
order::OrderTrace trace_from_json(const Json& j);

/// A model plus the seed and sample count that reproduce its dataset (GP
/// link values are regenerated from the seed rather than stored).
struct ModelFile {
    scm::ScmModel model;
    std::uint64_t seed = 0;
    int n = 0;
};
Json to_json(const ModelFile& m);
ModelFile model_from_json(const Json& j);

std::string read_file(const std::filesystem::path& path);
/// Refuses to replace an existing file unless `force` (ConfigError).
void write_file(const std::filesystem::path& path, const std::string& contents, bool force);
Json read_json_file(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace score_dag::io
