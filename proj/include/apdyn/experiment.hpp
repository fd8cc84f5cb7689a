#pragma once

#include <string>

#include "apdyn/config.hpp"
#include "apdyn/reports.hpp"

namespace apdyn {

struct InvalidParams : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind {
    RelationScan,
    Counterexample,
    CubeResidual,
    Averages,
    MotionScan,
    TransitivityProbe,
};

ExperimentKind experiment_kind_from_string(const std::string& name);  // throws ConfigError
std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::RelationScan;
    KvConfig raw;          // the full parsed config
    std::string out_dir;   // where the bundle is written
    int workers = 1;
    std::uint64_t seed = 0;
};

/// Parses experiment.kind, run.workers, run.seed and output.dir from the
/// config. Callers (the CLI) may override the fields afterwards.
ExperimentConfig load_experiment(const KvConfig& cfg);

/// Validates the parameters for the configured kind, dispatches to the
/// library, writes the bundle (CSV tables, results.jsonl, MANIFEST) and
/// returns it. Rerunning the same config byte-reproduces every data file
/// except the wall-time line of MANIFEST. All numbers in the bundle come
/// from library operations; this layer only formats.
ReportBundle run_experiment(const ExperimentConfig& cfg);

/// CLI exit codes: distinct per error family.
enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 2,
    kExitInvalidParams = 3,
    kExitIoError = 4,
};

}  // namespace apdyn
