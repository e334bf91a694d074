#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "score_dag/bench.hpp"
#include "score_dag/cli.hpp"
#include "score_dag/io.hpp"

namespace fs = std::filesystem;
using score_dag::io::Json;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = score_dag::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("score_dag_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

std::vector<std::string> generate_args(const fs::path& dir, const std::string& tag) {
    return {"--seed", "7", "generate", "--d", "10", "--graph", "ER1", "--n", "1000",
            "--data", (dir / (tag + ".csv")).string(), "--truth", (dir / (tag + "_truth.json")).string(),
            "--model", (dir / (tag + "_model.json")).string()};
}

}  // namespace

TEST_CASE("generate writes the requested shape, deterministically") {
    const fs::path dir = fresh_dir("generate");
    REQUIRE(run(generate_args(dir, "a")).code == 0);
    REQUIRE(run(generate_args(dir, "b")).code == 0);
    const std::string csv = slurp(dir / "a.csv");
    std::istringstream lines(csv);
    std::string line;
    int count = 0;
    std::getline(lines, line);
    CHECK(line == "x0,x1,x2,x3,x4,x5,x6,x7,x8,x9");
    while (std::getline(lines, line)) ++count;
    CHECK(count == 1000);
    CHECK(csv == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a_truth.json") == slurp(dir / "b_truth.json"));
    CHECK(slurp(dir / "a_model.json") == slurp(dir / "b_model.json"));

    // Existing outputs are protected.
    CHECK(run(generate_args(dir, "a")).code == 1);
    auto forced = generate_args(dir, "a");
    forced.insert(forced.begin(), "--force");
    CHECK(run(forced).code == 0);
}

TEST_CASE("generate rejects impossible graphs") {
    const fs::path dir = fresh_dir("bad");
    const Result r = run({"generate", "--d", "3", "--graph", "ER4", "--data", (dir / "x.csv").string(), "--truth",
                          (dir / "t.json").string(), "--model", (dir / "m.json").string()});
    CHECK(r.code == 1);
    CHECK(!r.err.empty());
    CHECK(!fs::exists(dir / "x.csv"));
    CHECK(run({"generate", "--graph", "ER9"}).code == 1);
    CHECK(run({"nonsense"}).code == 1);
    CHECK(run({}).code == 1);
}

TEST_CASE("discover and eval") {
    const fs::path dir = fresh_dir("discover");
    REQUIRE(run({"--seed", "3", "generate", "--d", "5", "--n", "300", "--data", (dir / "d.csv").string(), "--truth",
                 (dir / "t.json").string(), "--model", (dir / "m.json").string()})
                .code == 0);
    const Result disc = run({"discover", "--data", (dir / "d.csv").string(), "--out", (dir / "e.json").string(),
                             "--trace", (dir / "trace.json").string(), "--order", (dir / "o.json").string()});
    REQUIRE(disc.code == 0);
    CHECK(disc.out.find("order:") != std::string::npos);
    const Json est = Json::parse(slurp(dir / "e.json"));
    CHECK(est.at("d") == 5);
    CHECK(Json::parse(slurp(dir / "trace.json")).at("steps").size() == 5);

    const Result ev = run({"eval", "--truth", (dir / "t.json").string(), "--est", (dir / "e.json").string(),
                           "--order", (dir / "trace.json").string(), "--out", (dir / "r.json").string()});
    REQUIRE(ev.code == 0);
    const Json report = Json::parse(ev.out);
    CHECK(report.at("d_top").is_number_integer());
    CHECK(Json::parse(slurp(dir / "r.json")) == report);

    const Result same = run({"eval", "--truth", (dir / "t.json").string(), "--est", (dir / "t.json").string()});
    REQUIRE(same.code == 0);
    CHECK(Json::parse(same.out) == Json::parse(R"({"shd":0,"sid":0,"d_top":null})"));

    CHECK(run({"eval", "--truth", (dir / "missing.json").string(), "--est", (dir / "t.json").string()}).code == 2);
    spit(dir / "small.json", R"({"d":2,"edges":[]})");
    CHECK(run({"eval", "--truth", (dir / "small.json").string(), "--est", (dir / "t.json").string()}).code == 2);
}

TEST_CASE("eval on a reversed chain order") {
    const fs::path dir = fresh_dir("chain");
    spit(dir / "chain.json", R"({"d":4,"edges":[[0,1],[1,2],[2,3]]})");
    spit(dir / "rev.json", R"({"order":[3,2,1,0]})");
    const Result r = run({"eval", "--truth", (dir / "chain.json").string(), "--est", (dir / "chain.json").string(),
                          "--order", (dir / "rev.json").string()});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out).at("d_top") == 3);
}

TEST_CASE("discover input handling") {
    const fs::path dir = fresh_dir("csv");
    std::string one = "x0\n";
    for (int i = 0; i < 40; ++i) one += std::to_string(0.37 * i * i - 2.0 * i) + "\n";
    spit(dir / "one.csv", one);
    REQUIRE(run({"discover", "--data", (dir / "one.csv").string(), "--out", (dir / "one.json").string()}).code == 0);
    CHECK(Json::parse(slurp(dir / "one.json")) == Json::parse(R"({"d":1,"edges":[]})"));

    spit(dir / "nan.csv", "x0,x1\n1,2\n3,NaN\n");
    const Result bad = run({"discover", "--data", (dir / "nan.csv").string(), "--out", (dir / "nan.json").string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("line 3") != std::string::npos);

    const Result missing = run({"discover", "--data", (dir / "none.csv").string(), "--out", (dir / "x.json").string()});
    CHECK(missing.code == 2);

    spit(dir / "const.csv", "x0,x1\n1,2\n1,2\n1,2\n");
    CHECK(run({"discover", "--data", (dir / "const.csv").string(), "--out", (dir / "c.json").string()}).code == 2);
    CHECK(run({"discover", "--data", (dir / "one.csv").string(), "--eta", "-1", "--out",
               (dir / "neg.json").string()})
              .code == 1);
}

TEST_CASE("bench: empty run, flush, resume and overwrite protection") {
    const fs::path dir = fresh_dir("bench");
    const std::string out = (dir / "b.json").string();
    const Result empty = run({"bench", "--runs", "0", "--out", out});
    REQUIRE(empty.code == 0);
    CHECK(Json::parse(slurp(out)).at("rows").empty());
    CHECK(run({"bench", "--runs", "0", "--out", out}).code == 1);

    const std::vector<std::string> base = {"--seed", "5", "bench", "--d", "4", "--n", "200", "--out"};
    auto with = [&](std::vector<std::string> extra) {
        std::vector<std::string> a = base;
        a.push_back(out);
        a.insert(a.end(), extra.begin(), extra.end());
        return a;
    };
    REQUIRE(run(with({"--runs", "2", "--resume"})).code == 1);  // config mismatch with the empty file
    fs::remove(out);
    REQUIRE(run(with({"--runs", "2"})).code == 0);
    const auto two = score_dag::cli::bench_from_json(Json::parse(slurp(out)));
    REQUIRE(two.rows.size() == 2);

    // Resume extends an interrupted run without recomputing the finished rows.
    Json partial = score_dag::cli::to_json(two);
    partial["config"]["runs"] = 3;
    spit(out, partial.dump());
    const Result resumed = run(with({"--runs", "3", "--resume"}));
    REQUIRE(resumed.code == 0);
    const auto three = score_dag::cli::bench_from_json(Json::parse(slurp(out)));
    REQUIRE(three.rows.size() == 3);
    CHECK(three.rows[0].order_seconds == two.rows[0].order_seconds);
    CHECK(three.rows[1].shd == two.rows[1].shd);

    // The same seed reproduces the metrics of a fresh run.
    const std::string other = (dir / "c.json").string();
    std::vector<std::string> fresh = base;
    fresh.push_back(other);
    fresh.insert(fresh.end(), {"--runs", "3", "--jobs", "2"});
    REQUIRE(run(fresh).code == 0);
    const auto again = score_dag::cli::bench_from_json(Json::parse(slurp(other)));
    for (int k = 0; k < 3; ++k) {
        CHECK(again.rows[k].shd == three.rows[k].shd);
        CHECK(again.rows[k].sid == three.rows[k].sid);
        CHECK(again.rows[k].d_top == three.rows[k].d_top);
        CHECK(again.rows[k].seed == three.rows[k].seed);
    }
}

TEST_CASE("version flag") {
    const Result r = run({"--version"});
    CHECK(r.code == 0);
    CHECK(!r.out.empty());
}
