// Experiment runner: parses a flat key=value config, dispatches to the
// library, and writes a report bundle (CSV tables, results.jsonl, MANIFEST,
// optional plot data). Every number in the outputs comes from a library
// operation; this binary only parses flags and formats.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "apdyn/config.hpp"
#include "apdyn/experiment.hpp"
#include "apdyn/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int workers = 0;          // 0 = take from config
    long long seed = -1;      // -1 = take from config
    bool plot = true;
};

std::string default_out_dir(const std::string& config_path, const std::string& kind) {
    const char* root = std::getenv("APDYN_OUT_ROOT");
    std::string stem = config_path;
    auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem = stem.substr(slash + 1);
    auto dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    std::string base = root ? std::string(root) : std::string("out");
    return base + "/" + kind + "-" + stem;
}

int run_with(const CommonArgs& args, apdyn::ExperimentKind expected) {
    try {
        apdyn::KvConfig cfg = apdyn::KvConfig::parse_file(args.config_path);
        apdyn::ExperimentConfig exp = apdyn::load_experiment(cfg);
        if (exp.kind != expected) {
            std::cerr << "error: config kind '" << apdyn::to_string(exp.kind)
                      << "' does not match subcommand '" << apdyn::to_string(expected) << "'\n";
            return apdyn::kExitConfigError;
        }
        if (!args.out_dir.empty())
            exp.out_dir = args.out_dir;
        else if (exp.out_dir.empty())
            exp.out_dir = default_out_dir(args.config_path, apdyn::to_string(expected));
        if (args.workers > 0) exp.workers = args.workers;
        if (args.seed >= 0) exp.seed = static_cast<std::uint64_t>(args.seed);

        apdyn::ReportBundle bundle = apdyn::run_experiment(exp);
        if (args.plot) apdyn::emit_plot_data(bundle);
        for (const auto& line : bundle.summaries) std::cout << line << "\n";
        std::cout << "bundle written to " << bundle.dir << "\n";
        return apdyn::kExitOk;
    } catch (const apdyn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return apdyn::kExitConfigError;
    } catch (const apdyn::InvalidParams& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return apdyn::kExitInvalidParams;
    } catch (const apdyn::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return apdyn::kExitIoError;
    }
}

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "experiment config file")->required();
    sub->add_option("--out", args.out_dir, "output directory (default: $APDYN_OUT_ROOT/<kind>-<config>)");
    sub->add_option("--workers", args.workers, "worker threads (overrides run.workers)");
    sub->add_option("--seed", args.seed, "seed for random restarts (overrides run.seed)");
    sub->add_flag("--plot,!--no-plot", args.plot, "emit plot-data files (default on)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"torus dynamics experiment runner"};
    app.set_version_flag("--version", apdyn::kVersion);
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        apdyn::ExperimentKind kind;
    };
    const Sub subs[] = {
        {"relation", "proximal / ap / rp / ind_ap detector scans", apdyn::ExperimentKind::RelationScan},
        {"counterexample", "orbit check for the arithmetic-progression obstruction",
         apdyn::ExperimentKind::Counterexample},
        {"cubes", "parallelepiped degeneracy residuals", apdyn::ExperimentKind::CubeResidual},
        {"average", "Birkhoff / progression / recurrence averages", apdyn::ExperimentKind::Averages},
        {"motion", "cocycle deviation scan over a grid", apdyn::ExperimentKind::MotionScan},
        {"probe-transitivity", "witness search for (a,b), (b,c), then (a,c)",
         apdyn::ExperimentKind::TransitivityProbe},
    };

    CommonArgs args[6];
    int selected = -1;
    for (int i = 0; i < 6; ++i) {
        CLI::App* sub = app.add_subcommand(subs[i].name, subs[i].help);
        add_common(sub, args[i]);
        sub->callback([&selected, i] { selected = i; });
    }

    CLI11_PARSE(app, argc, argv);
    if (selected < 0) return apdyn::kExitConfigError;
    return run_with(args[selected], subs[selected].kind);
}
