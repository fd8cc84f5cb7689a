#include "apdyn/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "apdyn/averages.hpp"
#include "apdyn/cocycle.hpp"
#include "apdyn/cubes.hpp"
#include "apdyn/relations.hpp"
#include "apdyn/system.hpp"
#include "apdyn/version.hpp"

namespace apdyn {
namespace {

using nlohmann::json;

SystemSpec system_from_config(const KvConfig& cfg) {
    return SystemSpec::from_kv(cfg.section("system"), "system.");
}

CocycleParams cocycle_from_config(const KvConfig& cfg) {
    CocycleParams p;
    p.alpha = parse_angle(cfg.get_or("cocycle.alpha", "liouville"));
    p.lambda = cfg.get_double_or("cocycle.lambda", 1.0);
    p.beta = parse_angle(cfg.get_or("cocycle.beta", "sqrt2m1"));
    if (cfg.has("cocycle.freqs"))
        p.freqs = cfg.get_int_list("cocycle.freqs");
    else
        p.freqs = default_frequencies(static_cast<int>(cfg.get_int_or("cocycle.K", 3)));
    p.validate();
    return p;
}

Observable parse_observable(const std::string& text) {
    // factors joined by '*'; each factor: one | cos:axis:freq | box:lo,hi[;lo2,hi2]
    std::vector<Observable> factors;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t star = text.find('*', pos);
        if (star == std::string::npos) star = text.size();
        std::string part = text.substr(pos, star - pos);
        if (part == "one" || part == "1") {
            factors.push_back(Observable::one());
        } else if (part.rfind("cos:", 0) == 0) {
            auto rest = part.substr(4);
            auto colon = rest.find(':');
            if (colon == std::string::npos) throw ConfigError("bad observable '" + part + "'");
            int axis = static_cast<int>(std::strtoll(rest.substr(0, colon).c_str(), nullptr, 10));
            long long freq = std::strtoll(rest.substr(colon + 1).c_str(), nullptr, 10);
            factors.push_back(Observable::coordinate_cosine(axis, freq));
        } else if (part.rfind("box:", 0) == 0) {
            auto rest = part.substr(4);
            std::vector<std::pair<double, double>> bounds;
            std::size_t p2 = 0;
            while (p2 <= rest.size()) {
                std::size_t semi = rest.find(';', p2);
                if (semi == std::string::npos) semi = rest.size();
                std::string pair = rest.substr(p2, semi - p2);
                auto comma = pair.find(',');
                if (comma == std::string::npos) throw ConfigError("bad box bounds '" + pair + "'");
                bounds.emplace_back(std::strtod(pair.substr(0, comma).c_str(), nullptr),
                                    std::strtod(pair.substr(comma + 1).c_str(), nullptr));
                p2 = semi + 1;
            }
            factors.push_back(Observable::indicator_box(bounds));
        } else {
            throw ConfigError("unknown observable '" + part + "'");
        }
        pos = star + 1;
    }
    if (factors.empty()) throw ConfigError("empty observable");
    if (factors.size() == 1) return factors[0];
    return Observable::product(std::move(factors));
}

std::string status_str(const RelationVerdict& v) {
    return v.status == RelationStatus::Witnessed ? "witnessed" : "refuted_at_budget";
}

std::string times_str(const std::vector<long long>& times) {
    std::string s;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(times[i]);
    }
    return s;
}

struct JsonlWriter {
    std::ofstream out;
    explicit JsonlWriter(const std::string& path) : out(path, std::ios::trunc) {
        if (!out) throw IoError("cannot open '" + path + "'");
    }
    void record(const json& j) { out << j.dump() << "\n"; }
};

json verdict_record(const RelationVerdict& v) { return json::parse(relation_verdict_json(v)); }
json query_record(const RelationQuery& q) { return json::parse(relation_query_json(q)); }

void run_relation_scan(const ExperimentConfig& cfg, ReportBundle& bundle) {
    SystemSpec sys = system_from_config(cfg.raw);
    RelationQuery q;
    q.x = parse_point(cfg.raw.get("query.x"));
    q.y = parse_point(cfg.raw.get("query.y"));
    q.d = static_cast<int>(cfg.raw.get_int_or("query.d", 1));
    q.delta = cfg.raw.get_double("query.delta");
    q.n_max = cfg.raw.get_int("query.n_max");
    q.ball_grid = static_cast<int>(cfg.raw.get_int_or("query.ball_grid", 1));
    SearchOptions opts{cfg.workers, cfg.raw.get_int_or("run.random_restarts", 0), cfg.seed};
    const std::string relation = cfg.raw.get("query.relation");

    RelationVerdict v;
    if (relation == "proximal")
        v = detect_proximal(sys, q, opts);
    else if (relation == "ap")
        v = detect_ap(sys, q, opts);
    else if (relation == "rp")
        v = detect_rp(sys, q, opts);
    else if (relation == "ind_ap")
        v = detect_ind_ap(sys, q, cfg.raw.get_int("query.sample_grid"), opts);
    else
        throw ConfigError("unknown relation '" + relation + "'");

    JsonlWriter log(bundle.dir + "/" + bundle.results_log);
    json rec;
    rec["experiment"] = "relation-scan";
    rec["relation"] = relation;
    rec["system"] = sys.describe();
    rec["query"] = query_record(q);
    rec["verdict"] = verdict_record(v);
    log.record(rec);

    CsvWriter csv(bundle.dir + "/summary.csv",
                  {"relation", "d", "delta", "n_max", "ball_grid", "status", "residual",
                   "witness_times", "witness_x", "witness_y"});
    csv.row({relation, std::to_string(q.d), fmt_g17(q.delta), std::to_string(q.n_max),
             std::to_string(q.ball_grid), status_str(v), fmt_g17(v.residual),
             v.witness ? times_str(v.witness->times) : "",
             v.witness ? to_hex(v.witness->xp) : "", v.witness ? to_hex(v.witness->yp) : ""});
    csv.close();
    bundle.csv_files.push_back("summary.csv");

    bundle.summaries.push_back("relation-scan " + relation + " d=" + std::to_string(q.d) + " -> " +
                               status_str(v) + " residual=" + fmt_g17(v.residual) +
                               (v.witness ? " n=" + times_str(v.witness->times) : ""));
}

void run_counterexample(const ExperimentConfig& cfg, ReportBundle& bundle) {
    FixedAngle alpha = parse_angle(cfg.raw.get_or("query.alpha", "golden"));
    FixedAngle y = parse_angle(cfg.raw.get("query.y"));
    double epsilon = cfg.raw.get_double("query.epsilon");
    long long n_max = cfg.raw.get_int("query.n_max");
    SearchOptions opts{cfg.workers, 0, cfg.seed};

    RelationVerdict v = weyl_ap1_orbit_check(alpha, y, epsilon, n_max, opts);

    JsonlWriter log(bundle.dir + "/" + bundle.results_log);
    json rec;
    rec["experiment"] = "counterexample";
    rec["alpha"] = alpha.to_hex();
    rec["y"] = y.to_hex();
    rec["epsilon"] = epsilon;
    rec["n_max"] = n_max;
    rec["verdict"] = verdict_record(v);
    log.record(rec);

    CsvWriter csv(bundle.dir + "/summary.csv",
                  {"alpha", "y", "epsilon", "n_max", "status", "residual", "best_n"});
    csv.row({alpha.to_hex(), y.to_hex(), fmt_g17(epsilon), std::to_string(n_max), status_str(v),
             fmt_g17(v.residual), times_str(v.best_times)});
    csv.close();
    bundle.csv_files.push_back("summary.csv");

    bundle.summaries.push_back("counterexample y=" + fmt_g17(y.to_double()) + " -> " +
                               status_str(v) + " residual=" + fmt_g17(v.residual) +
                               " best_n=" + times_str(v.best_times));
}

void run_cube_residual(const ExperimentConfig& cfg, ReportBundle& bundle) {
    SystemSpec sys = system_from_config(cfg.raw);
    int d = static_cast<int>(cfg.raw.get_int_or("query.d", 2));
    TorusPoint x = parse_point(cfg.raw.get("query.x"));
    TorusPoint y = parse_point(cfg.raw.get("query.y"));
    long long zgrid = cfg.raw.get_int("query.zgrid");
    std::vector<long long> budgets = cfg.raw.get_int_list("query.budgets");

    JsonlWriter log(bundle.dir + "/" + bundle.results_log);
    CsvWriter csv(bundle.dir + "/residual.csv", {"face_bound", "zgrid", "residual"});
    PlotSeries series{"residual_vs_budget", {"face_bound", "residual"}, {}};
    for (long long b : budgets) {
        DegeneracyBudget budget{b, zgrid, cfg.workers};
        double r = cube_degeneracy_residual(sys, d, x, y, budget);
        csv.row({std::to_string(b), std::to_string(zgrid), fmt_g17(r)});
        series.rows.push_back({static_cast<double>(b), r});
        json rec;
        rec["experiment"] = "cube-residual";
        rec["d"] = d;
        rec["face_bound"] = b;
        rec["zgrid"] = zgrid;
        rec["residual"] = r;
        log.record(rec);
        bundle.summaries.push_back("cube-residual d=" + std::to_string(d) +
                                   " face_bound=" + std::to_string(b) + " -> " + fmt_g17(r));
    }
    csv.close();
    bundle.csv_files.push_back("residual.csv");
    bundle.series.push_back(std::move(series));

    // optional parallelepiped sample, one CSV row per vertex
    if (cfg.raw.has("query.sample_nvec")) {
        FaceElement nvec{cfg.raw.get_int_list("query.sample_nvec")};
        write_cube_csv(cube_point(sys, x, nvec), bundle.dir + "/cube.csv");
        bundle.csv_files.push_back("cube.csv");
    }
}

void write_series_outputs(const AverageSeries& series, const std::string& label,
                          ReportBundle& bundle) {
    CsvWriter csv(bundle.dir + "/series.csv", {"N", "value"});
    PlotSeries plot{label, {"N", "value"}, {}};
    for (const auto& cp : series.checkpoints) {
        csv.row({std::to_string(cp.n), fmt_g17(cp.value)});
        plot.rows.push_back({static_cast<double>(cp.n), cp.value});
    }
    csv.close();
    bundle.csv_files.push_back("series.csv");
    bundle.series.push_back(std::move(plot));

    JsonlWriter log(bundle.dir + "/" + bundle.results_log);
    json rec;
    rec["experiment"] = label;
    rec["final"] = series.final_value;
    rec["oscillation"] = series.oscillation;
    rec["checkpoints"] = series.checkpoints.size();
    log.record(rec);

    bundle.summaries.push_back(label + " -> final=" + fmt_g17(series.final_value) +
                               " oscillation=" + fmt_g17(series.oscillation));
}

void run_averages(const ExperimentConfig& cfg, ReportBundle& bundle) {
    const std::string op = cfg.raw.get("query.op");
    if (op == "birkhoff") {
        SystemSpec sys = system_from_config(cfg.raw);
        Observable f = parse_observable(cfg.raw.get("query.f"));
        TorusPoint x = parse_point(cfg.raw.get("query.x"));
        auto series = birkhoff_average(sys, f, x, cfg.raw.get_int_list("query.N_list"));
        write_series_outputs(series, "birkhoff-average", bundle);
    } else if (op == "multiple") {
        SystemSpec sys = system_from_config(cfg.raw);
        std::vector<Observable> fs;
        for (int i = 1; i <= 4; ++i) {
            std::string key = "query.f" + std::to_string(i);
            if (!cfg.raw.has(key)) break;
            fs.push_back(parse_observable(cfg.raw.get(key)));
        }
        TorusPoint x = parse_point(cfg.raw.get("query.x"));
        auto series = multiple_ergodic_average(sys, fs, x, cfg.raw.get_int_list("query.N_list"));
        write_series_outputs(series, "multiple-ergodic-average", bundle);
    } else if (op == "recurrence") {
        SystemSpec sys = system_from_config(cfg.raw);
        Observable box = parse_observable(cfg.raw.get("query.A"));
        int k = static_cast<int>(cfg.raw.get_int("query.k"));
        long long n = cfg.raw.get_int("query.N");
        long long grid = cfg.raw.get_int("query.grid");
        auto series = multiple_recurrence_frequency(sys, box, k, n, grid, cfg.workers);
        write_series_outputs(series, "recurrence-frequency", bundle);
    } else if (op == "circle-extension") {
        CocycleParams params = cocycle_from_config(cfg.raw);
        TorusPoint w = parse_point(cfg.raw.get("query.w"));
        auto series = circle_extension_average(params, cfg.raw.get_int_list("query.N_list"), w);
        write_series_outputs(series, "circle-extension-average", bundle);
    } else {
        throw ConfigError("unknown averages op '" + op + "'");
    }
}

void run_motion_scan(const ExperimentConfig& cfg, ReportBundle& bundle) {
    CocycleParams params = cocycle_from_config(cfg.raw);
    long long grid_size = cfg.raw.get_int("query.grid_size");
    long long n_steps = cfg.raw.get_int("query.N");
    double threshold = cfg.raw.get_double("query.threshold");

    DeviationReport rep = unbounded_motion_scan(params, grid_size, n_steps, threshold, cfg.workers);

    CsvWriter csv(bundle.dir + "/deviation.csv", {"x", "sup_n", "argmax_n", "inf_n"});
    PlotSeries plot{"deviation", {"x", "sup_n", "argmax_n", "inf_n"}, {}};
    for (const auto& pt : rep.points) {
        csv.row({fmt_g17(pt.x), fmt_g17(pt.sup), std::to_string(pt.argmax_abs), fmt_g17(pt.inf)});
        plot.rows.push_back({pt.x, pt.sup, static_cast<double>(pt.argmax_abs), pt.inf});
    }
    csv.close();
    bundle.csv_files.push_back("deviation.csv");
    bundle.series.push_back(std::move(plot));

    JsonlWriter log(bundle.dir + "/" + bundle.results_log);
    json rec;
    rec["experiment"] = "motion-scan";
    rec["grid_size"] = rep.grid_size;
    rec["N"] = rep.n_steps;
    rec["threshold"] = rep.threshold;
    rec["lambda"] = rep.lambda;
    rec["global_max_abs"] = rep.global_max_abs;
    rec["global_max_x"] = rep.points[static_cast<std::size_t>(rep.global_max_index)].x;
    rec["evidence_index"] = rep.evidence_index;
    rec["min_over_grid_sup"] = rep.min_over_grid_sup;
    rec["min_sup_x"] = rep.points[static_cast<std::size_t>(rep.min_sup_index)].x;
    rec["max_over_grid_inf"] = rep.max_over_grid_inf;
    rec["min_over_grid_max_abs"] = rep.min_over_grid_max_abs;
    log.record(rec);

    bundle.summaries.push_back(
        "motion-scan grid=" + std::to_string(rep.grid_size) + " N=" + std::to_string(rep.n_steps) +
        " -> max|S|=" + fmt_g17(rep.global_max_abs) +
        (rep.evidence_index >= 0
             ? " evidence_x=" + fmt_g17(rep.points[static_cast<std::size_t>(rep.evidence_index)].x)
             : " no point above threshold"));
}

void run_transitivity_probe(const ExperimentConfig& cfg, ReportBundle& bundle) {
    SystemSpec sys = system_from_config(cfg.raw);
    TorusPoint a = parse_point(cfg.raw.get("query.a"));
    TorusPoint b = parse_point(cfg.raw.get("query.b"));
    TorusPoint c = parse_point(cfg.raw.get("query.c"));
    RelationQuery base;
    base.d = static_cast<int>(cfg.raw.get_int_or("query.d", 1));
    base.delta = cfg.raw.get_double("query.delta");
    base.n_max = cfg.raw.get_int("query.n_max");
    base.ball_grid = static_cast<int>(cfg.raw.get_int_or("query.ball_grid", 1));
    SearchOptions opts{cfg.workers, cfg.raw.get_int_or("run.random_restarts", 0), cfg.seed};

    JsonlWriter log(bundle.dir + "/" + bundle.results_log);
    CsvWriter csv(bundle.dir + "/probe.csv",
                  {"pair", "status", "residual", "witness_times"});
    const std::pair<std::string, std::pair<TorusPoint, TorusPoint>> pairs[] = {
        {"ab", {a, b}}, {"bc", {b, c}}, {"ac", {a, c}}};
    for (const auto& [name, pr] : pairs) {
        RelationQuery q = base;
        q.x = pr.first;
        q.y = pr.second;
        RelationVerdict v = detect_ap(sys, q, opts);
        csv.row({name, status_str(v), fmt_g17(v.residual),
                 v.witness ? times_str(v.witness->times) : ""});
        json rec;
        rec["experiment"] = "transitivity-probe";
        rec["pair"] = name;
        rec["query"] = query_record(q);
        rec["verdict"] = verdict_record(v);
        log.record(rec);
        bundle.summaries.push_back("probe " + name + " -> " + status_str(v) +
                                   " residual=" + fmt_g17(v.residual));
    }
    csv.close();
    bundle.csv_files.push_back("probe.csv");
}

}  // namespace

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "relation-scan") return ExperimentKind::RelationScan;
    if (name == "counterexample") return ExperimentKind::Counterexample;
    if (name == "cube-residual") return ExperimentKind::CubeResidual;
    if (name == "averages") return ExperimentKind::Averages;
    if (name == "motion-scan") return ExperimentKind::MotionScan;
    if (name == "transitivity-probe") return ExperimentKind::TransitivityProbe;
    throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::RelationScan: return "relation-scan";
        case ExperimentKind::Counterexample: return "counterexample";
        case ExperimentKind::CubeResidual: return "cube-residual";
        case ExperimentKind::Averages: return "averages";
        case ExperimentKind::MotionScan: return "motion-scan";
        case ExperimentKind::TransitivityProbe: return "transitivity-probe";
    }
    return "?";
}

ExperimentConfig load_experiment(const KvConfig& cfg) {
    ExperimentConfig out;
    out.kind = experiment_kind_from_string(cfg.get("experiment.kind"));
    out.raw = cfg;
    out.out_dir = cfg.get_or("output.dir", "");
    out.workers = static_cast<int>(cfg.get_int_or("run.workers", 1));
    out.seed = static_cast<std::uint64_t>(cfg.get_int_or("run.seed", 0));
    if (out.workers < 1) throw InvalidParams("run.workers must be >= 1");
    return out;
}

ReportBundle run_experiment(const ExperimentConfig& cfg) {
    if (cfg.out_dir.empty()) throw InvalidParams("output directory not set");
    auto t0 = std::chrono::steady_clock::now();

    ReportBundle bundle;
    bundle.dir = cfg.out_dir;
    bundle.results_log = "results.jsonl";
    bundle.config_hash = fnv1a64(cfg.raw.canonical_text());

    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
    if (!std::filesystem::is_directory(cfg.out_dir))
        throw IoError("output path '" + cfg.out_dir + "' is not a directory");

    try {
        switch (cfg.kind) {
            case ExperimentKind::RelationScan: run_relation_scan(cfg, bundle); break;
            case ExperimentKind::Counterexample: run_counterexample(cfg, bundle); break;
            case ExperimentKind::CubeResidual: run_cube_residual(cfg, bundle); break;
            case ExperimentKind::Averages: run_averages(cfg, bundle); break;
            case ExperimentKind::MotionScan: run_motion_scan(cfg, bundle); break;
            case ExperimentKind::TransitivityProbe: run_transitivity_probe(cfg, bundle); break;
        }
    } catch (const std::invalid_argument& e) {
        throw InvalidParams(e.what());
    } catch (const std::overflow_error& e) {
        throw InvalidParams(e.what());
    }

    bundle.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    write_manifest(bundle, kVersion);
    return bundle;
}

}  // namespace apdyn
