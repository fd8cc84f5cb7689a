#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "apdyn/relations.hpp"

namespace apdyn {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// RFC-4180 style CSV with a mandatory header row; fields are quoted only
/// when they need to be. Lines end with '\n'.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);
    void close();

private:
    void write_line(const std::vector<std::string>& fields);
    std::ofstream out_;
    std::string path_;
    std::size_t width_;
};

std::string fmt_g17(double v);

/// One data series destined for the plot-data files.
struct PlotSeries {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ReportBundle {
    std::string dir;
    std::vector<std::string> csv_files;  // names relative to dir
    std::string results_log;             // results.jsonl, relative to dir
    std::vector<PlotSeries> series;
    std::vector<std::string> summaries;  // one line per query, for stdout
    std::uint64_t config_hash = 0;
    long long wall_ms = 0;
};

void write_manifest(const ReportBundle& bundle, const std::string& version);

/// Whitespace-delimited columnar files under <dir>/plot/, one per series,
/// plus a gnuplot stub listing the columns. Emits a warning to stderr and
/// writes nothing when the bundle has no series.
void emit_plot_data(const ReportBundle& bundle);

/// Single-line JSON records for the results log.
std::string relation_query_json(const RelationQuery& q);
std::string relation_verdict_json(const RelationVerdict& v);

}  // namespace apdyn
