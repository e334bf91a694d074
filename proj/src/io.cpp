#include "score_dag/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

#include "score_dag/error.hpp"

namespace score_dag::io {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view field, double& value) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return false;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

template <typename T>
T get_field(const Json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) {
        throw DataError(std::string(what) + " JSON is missing field '" + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string(what) + " JSON field '" + key + "' has the wrong type: " + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string write_csv(const DataMatrix& x) {
    std::string out;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        if (j) out += ',';
        out += 'x';
        out += std::to_string(j);
    }
    out += '\n';
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (j) out += ',';
            out += format_double(x(k, j));
        }
        out += '\n';
    }
    return out;
}

DataMatrix read_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto fields = split_fields(view);
        std::vector<double> values(fields.size());
        bool numeric = true;
        std::size_t bad = 0;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (!parse_double(fields[c], values[c])) {
                numeric = false;
                bad = c;
                break;
            }
        }
        if (first) {
            first = false;
            width = fields.size();
            if (!numeric) continue;  // header
        }
        if (fields.size() != width) {
            throw DataError("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                            " fields, found " + std::to_string(fields.size()));
        }
        if (!numeric) {
            throw DataError("CSV line " + std::to_string(line_no) + ": field " + std::to_string(bad + 1) +
                            " is not a number ('" + std::string(trim(fields[bad])) + "')");
        }
        for (std::size_t c = 0; c < values.size(); ++c) {
            if (!std::isfinite(values[c])) {
                throw DataError("CSV line " + std::to_string(line_no) + ": field " + std::to_string(c + 1) +
                                " is not finite");
            }
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw DataError("CSV contains no data rows");
    DataMatrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        for (std::size_t j = 0; j < width; ++j) x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = rows[k][j];
    }
    return x;
}

Json to_json(const Dag& g) {
    Json edges = Json::array();
    for (const auto& [from, to] : g.edges()) edges.push_back({from, to});
    return Json{{"d", g.size()}, {"edges", edges}};
}

Dag dag_from_json(const Json& j) {
    const int d = get_field<int>(j, "d", "graph");
    if (d < 1) throw DataError("graph JSON: d must be >= 1");
    const auto edges = get_field<std::vector<std::pair<int, int>>>(j, "edges", "graph");
    Dag g(d);
    for (const auto& [from, to] : edges) g.set_edge(from, to);
    if (!g.is_acyclic()) throw DataError("graph JSON describes a cyclic graph");
    return g;
}

Json to_json(const TopoOrder& order) { return Json{{"order", order.nodes()}}; }

TopoOrder order_from_json(const Json& j) {
    if (j.is_array()) return TopoOrder(j.get<std::vector<int>>());
    return TopoOrder(get_field<std::vector<int>>(j, "order", "order"));
}

Json to_json(const metrics::MetricReport& r) {
    Json j{{"shd", r.shd}, {"sid", r.sid}};
    j["d_top"] = r.d_top ? Json(*r.d_top) : Json(nullptr);
    return j;
}

metrics::MetricReport report_from_json(const Json& j) {
    metrics::MetricReport r;
    r.shd = get_field<int>(j, "shd", "metric report");
    r.sid = get_field<int>(j, "sid", "metric report");
    if (j.contains("d_top") && !j.at("d_top").is_null()) r.d_top = j.at("d_top").get<int>();
    return r;
}

Json to_json(const order::OrderTrace& trace) {
    Json steps = Json::array();
    for (const auto& s : trace.steps) {
        steps.push_back(Json{{"remaining", s.remaining},
                             {"variance", s.variance},
                             {"leaf", s.leaf},
                             {"bandwidth", s.bandwidth},
                             {"leaf_mean", s.leaf_mean}});
    }
    return Json{{"order", trace.order.nodes()}, {"steps", steps}};
}

order::OrderTrace trace_from_json(const Json& j) {
    order::OrderTrace trace;
    trace.order = TopoOrder(get_field<std::vector<int>>(j, "order", "trace"));
    for (const auto& s : get_field<Json>(j, "steps", "trace")) {
        order::OrderStep step;
        step.remaining = get_field<std::vector<int>>(s, "remaining", "trace step");
        step.variance = get_field<std::vector<double>>(s, "variance", "trace step");
        step.leaf = get_field<int>(s, "leaf", "trace step");
        step.bandwidth = get_field<double>(s, "bandwidth", "trace step");
        step.leaf_mean = get_field<double>(s, "leaf_mean", "trace step");
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

Json to_json(const ModelFile& m) {
    Json noise = Json::array();
    for (const auto& spec : m.model.noise) {
        noise.push_back(Json{{"family", scm::to_string(spec.family)}, {"variance", spec.variance}});
    }
    Json j = to_json(m.model.graph);
    j["link"] = scm::to_string(m.model.link);
    j["noise"] = noise;
    j["seed"] = m.seed;
    j["n"] = m.n;
    if (m.model.link == scm::LinkKind::Gp) {
        j["gp_bandwidth"] = m.model.gp_bandwidth;
        j["gp_jitter"] = m.model.gp_jitter;
    } else {
        Json terms = Json::array();
        for (const auto& node_terms : m.model.terms) {
            Json list = Json::array();
            for (const auto& t : node_terms) {
                list.push_back(Json{{"parent", t.parent}, {"a", t.a}, {"b", t.b}, {"c", t.c}, {"e", t.e}});
            }
            terms.push_back(list);
        }
        j["terms"] = terms;
    }
    return j;
}

ModelFile model_from_json(const Json& j) {
    ModelFile m;
    m.model.graph = dag_from_json(j);
    m.model.link = scm::parse_link_kind(get_field<std::string>(j, "link", "model"));
    m.seed = get_field<std::uint64_t>(j, "seed", "model");
    m.n = get_field<int>(j, "n", "model");
    for (const auto& spec : get_field<Json>(j, "noise", "model")) {
        m.model.noise.push_back(scm::NoiseSpec{scm::parse_noise_family(get_field<std::string>(spec, "family", "noise")),
                                               get_field<double>(spec, "variance", "noise")});
    }
    m.model.terms.resize(static_cast<std::size_t>(m.model.graph.size()));
    if (m.model.link == scm::LinkKind::Gp) {
        m.model.gp_bandwidth = get_field<double>(j, "gp_bandwidth", "model");
        m.model.gp_jitter = get_field<double>(j, "gp_jitter", "model");
    } else {
        const Json terms = get_field<Json>(j, "terms", "model");
        if (!terms.is_array() || terms.size() != m.model.terms.size()) {
            throw DataError("model JSON: 'terms' must hold one list per node");
        }
        for (std::size_t i = 0; i < terms.size(); ++i) {
            for (const auto& t : terms[i]) {
                m.model.terms[i].push_back(scm::ParametricTerm{get_field<int>(t, "parent", "term"),
                                                               get_field<double>(t, "a", "term"),
                                                               get_field<double>(t, "b", "term"),
                                                               get_field<double>(t, "c", "term"),
                                                               get_field<double>(t, "e", "term")});
            }
        }
    }
    try {
        m.model.validate();
    } catch (const ConfigError& e) {
        throw DataError(std::string("model JSON is invalid: ") + e.what());
    }
    return m;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents, bool force) {
    if (!force && std::filesystem::exists(path)) {
        throw ConfigError("refusing to overwrite '" + path.string() + "' (use --force)");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw DataError("write to '" + path.string() + "' failed");
}

Json read_json_file(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace score_dag::io
