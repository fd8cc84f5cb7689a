#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "apdyn/experiment.hpp"
#include "apdyn/version.hpp"

using namespace apdyn;
namespace fs = std::filesystem;

namespace {

std::string config_dir = APDYN_CONFIG_DIR;

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("apdyn-test-" + tag);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig load_config_file(const std::string& name, const fs::path& out,
                                  int workers = 1) {
    KvConfig cfg = KvConfig::parse_file(config_dir + "/" + name);
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    exp.workers = workers;
    return exp;
}

}  // namespace

TEST_CASE("KvConfig parsing") {
    auto cfg = KvConfig::parse_string(
        "# comment\n[sec]\na = 1\nb = hello world  # trailing\n\n[other]\nlist = 1, 2,3\n");
    CHECK(cfg.get("sec.a") == "1");
    CHECK(cfg.get("sec.b") == "hello world");
    CHECK(cfg.get_int("sec.a") == 1);
    CHECK(cfg.get_int_list("other.list") == std::vector<long long>{1, 2, 3});
    CHECK(cfg.get_or("sec.missing", "x") == "x");
    CHECK_THROWS_AS(cfg.get("nope"), ConfigError);
    CHECK_THROWS_AS(cfg.get_int("sec.b"), ConfigError);
    CHECK_THROWS_AS(KvConfig::parse_string("[open\n"), ConfigError);
    CHECK_THROWS_AS(KvConfig::parse_string("novalue\n"), ConfigError);

    // canonical text round trips to the same key/value map
    auto back = KvConfig::parse_string(cfg.canonical_text());
    CHECK(back.values() == cfg.values());
}

TEST_CASE("unknown experiment kind and missing files") {
    CHECK_THROWS_AS(experiment_kind_from_string("frobnicate"), ConfigError);
    CHECK_THROWS_AS(KvConfig::parse_file("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("counterexample experiment writes a refuted record") {
    auto out = fresh_dir("counter");
    KvConfig cfg = KvConfig::parse_file(config_dir + "/counterexample.ini");
    cfg.set("query.n_max", "20000");  // trimmed budget, same verdict
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    ReportBundle bundle = run_experiment(exp);

    std::string log = slurp(out / "results.jsonl");
    CHECK(log.find("refuted_at_budget") != std::string::npos);
    CHECK(std::count(log.begin(), log.end(), '\n') == 1);  // one record per query

    std::string csv = slurp(out / "summary.csv");
    CHECK(csv.rfind("alpha,y,epsilon,n_max,status,residual,best_n", 0) == 0);

    std::string manifest = slurp(out / "MANIFEST");
    CHECK(manifest.find("config_hash = ") != std::string::npos);
    CHECK(manifest.find("version = ") != std::string::npos);
    CHECK(manifest.find(kVersion) != std::string::npos);
    CHECK(bundle.summaries.size() == 1);
}

TEST_CASE("motion scan with lambda = 0 reports all zeros") {
    auto out = fresh_dir("motion0");
    KvConfig cfg = KvConfig::parse_file(config_dir + "/motion_scan.ini");
    cfg.set("cocycle.lambda", "0");
    cfg.set("query.grid_size", "32");
    cfg.set("query.N", "500");
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    run_experiment(exp);

    std::ifstream in(out / "deviation.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,sup_n,argmax_n,inf_n");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        auto c3 = line.find(',', c2 + 1);
        CHECK(line.substr(c1 + 1, c2 - c1 - 1) == "0");
        CHECK(line.substr(c3 + 1) == "0");
    }
    CHECK(rows == 32);
}

TEST_CASE("identical configs byte-reproduce the bundle") {
    for (const char* name : {"relation_ap_weyl.ini", "cubes_rotation.ini"}) {
        auto out1 = fresh_dir(std::string("rep1-") + name);
        auto out2 = fresh_dir(std::string("rep2-") + name);
        KvConfig cfg = KvConfig::parse_file(config_dir + "/" + name);
        // trim the budgets so this stays quick
        if (cfg.has("query.n_max")) cfg.set("query.n_max", "2000");
        if (cfg.has("query.budgets")) cfg.set("query.budgets", "10,50");
        if (cfg.has("query.zgrid")) cfg.set("query.zgrid", "128");
        ExperimentConfig exp = load_experiment(cfg);
        exp.out_dir = out1.string();
        ReportBundle b1 = run_experiment(exp);
        exp.out_dir = out2.string();
        ReportBundle b2 = run_experiment(exp);
        REQUIRE(b1.csv_files == b2.csv_files);
        for (const auto& f : b1.csv_files) CHECK(slurp(out1 / f) == slurp(out2 / f));
        CHECK(slurp(out1 / "results.jsonl") == slurp(out2 / "results.jsonl"));
        CHECK(b1.config_hash == b2.config_hash);
    }
}

TEST_CASE("plot data mirrors the series") {
    auto out = fresh_dir("plot");
    KvConfig cfg = KvConfig::parse_file(config_dir + "/average_birkhoff.ini");
    cfg.set("query.N_list", "10,100,1000");
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    ReportBundle bundle = run_experiment(exp);
    REQUIRE(bundle.series.size() == 1);
    emit_plot_data(bundle);

    std::string dat = slurp(out / "plot" / (bundle.series[0].name + ".dat"));
    // header comment plus one row per checkpoint
    CHECK(std::count(dat.begin(), dat.end(), '\n') == 4);
    CHECK(dat.rfind("# N value", 0) == 0);
    CHECK(fs::exists(out / "plot" / "plot.gp"));

    ReportBundle empty;
    empty.dir = out.string();
    emit_plot_data(empty);  // warns, writes nothing new
}

TEST_CASE("deviation plot file mirrors the CSV schema") {
    auto out = fresh_dir("plotdev");
    KvConfig cfg = KvConfig::parse_file(config_dir + "/motion_scan.ini");
    cfg.set("query.grid_size", "16");
    cfg.set("query.N", "200");
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    ReportBundle bundle = run_experiment(exp);
    emit_plot_data(bundle);
    std::ifstream in(out / "plot" / "deviation.dat");
    std::string line;
    std::getline(in, line);
    CHECK(line == "# x sup_n argmax_n inf_n");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ' ') == 3);  // four columns
    }
    CHECK(rows == 16);
}

TEST_CASE("averages experiment emits CSV plus JSON summary") {
    auto out = fresh_dir("avg");
    KvConfig cfg = KvConfig::parse_file(config_dir + "/average_recurrence.ini");
    cfg.set("query.N", "100");
    cfg.set("query.grid", "4096");
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    run_experiment(exp);
    std::string csv = slurp(out / "series.csv");
    CHECK(csv.rfind("N,value", 0) == 0);
    std::string log = slurp(out / "results.jsonl");
    CHECK(log.find("\"final\"") != std::string::npos);
    CHECK(log.find("\"oscillation\"") != std::string::npos);
}

TEST_CASE("every results.jsonl line is a standalone JSON object") {
    auto out = fresh_dir("jsonl");
    KvConfig cfg = KvConfig::parse_file(config_dir + "/relation_ap_weyl.ini");
    cfg.set("query.n_max", "200");
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    run_experiment(exp);
    std::ifstream in(out / "results.jsonl");
    std::string line;
    int records = 0;
    while (std::getline(in, line)) {
        ++records;
        auto j = nlohmann::json::parse(line);
        CHECK(j.is_object());
        CHECK(j.contains("verdict"));
        CHECK(j["query"]["delta"] == 0.05);
    }
    CHECK(records == 1);
}

TEST_CASE("transitivity probe writes one row per pair") {
    auto out = fresh_dir("probe");
    KvConfig cfg = KvConfig::parse_file(config_dir + "/probe_transitivity.ini");
    cfg.set("query.n_max", "500");
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    ReportBundle bundle = run_experiment(exp);
    std::string csv = slurp(out / "probe.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + ab, bc, ac
    CHECK(csv.find("ab,") != std::string::npos);
    CHECK(csv.find("ac,") != std::string::npos);
    CHECK(bundle.summaries.size() == 3);
    std::string log = slurp(out / "results.jsonl");
    CHECK(std::count(log.begin(), log.end(), '\n') == 3);
}

TEST_CASE("invalid parameters are rejected before running") {
    auto out = fresh_dir("badparam");
    KvConfig cfg = KvConfig::parse_file(config_dir + "/average_recurrence.ini");
    cfg.set("query.A", "box:0,0.001");  // volume below the estimator floor
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = out.string();
    CHECK_THROWS_AS(run_experiment(exp), InvalidParams);

    KvConfig cfg2 = KvConfig::parse_file(config_dir + "/relation_ap_weyl.ini");
    cfg2.set("query.delta", "-1");
    ExperimentConfig exp2 = load_experiment(cfg2);
    exp2.out_dir = out.string();
    CHECK_THROWS_AS(run_experiment(exp2), InvalidParams);
}

TEST_CASE("unwritable output directory raises an i/o error") {
    KvConfig cfg = KvConfig::parse_file(config_dir + "/counterexample.ini");
    cfg.set("query.n_max", "10");
    ExperimentConfig exp = load_experiment(cfg);
    exp.out_dir = "/proc/version/cannot-create";  // /proc/version is a file
    CHECK_THROWS_AS(run_experiment(exp), IoError);
}

TEST_CASE("relation scan verdicts are stable across worker counts (file level)") {
    KvConfig cfg = KvConfig::parse_file(config_dir + "/relation_ap_weyl.ini");
    cfg.set("query.n_max", "3000");
    std::string first;
    for (int workers : {1, 4}) {
        auto out = fresh_dir("workers" + std::to_string(workers));
        ExperimentConfig exp = load_experiment(cfg);
        exp.out_dir = out.string();
        exp.workers = workers;
        run_experiment(exp);
        std::string csv = slurp(out / "summary.csv");
        if (first.empty())
            first = csv;
        else
            CHECK(csv == first);
    }
}
