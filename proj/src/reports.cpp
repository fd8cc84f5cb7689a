#include "apdyn/reports.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "json.hpp"

namespace apdyn {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::trunc), path_(path), width_(header.size()) {
    if (!out_) throw IoError("cannot open '" + path + "' for writing");
    write_line(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != width_) throw std::logic_error("CsvWriter: row width mismatch");
    write_line(fields);
}

void CsvWriter::write_line(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            line += '"';
            for (char c : f) {
                if (c == '"') line += '"';
                line += c;
            }
            line += '"';
        } else {
            line += f;
        }
    }
    line += '\n';
    out_ << line;
    if (!out_) throw IoError("write failed on '" + path_ + "'");
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) throw IoError("close failed on '" + path_ + "'");
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_manifest(const ReportBundle& bundle, const std::string& version) {
    std::string path = bundle.dir + "/MANIFEST";
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "'");
    char hash[24];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(bundle.config_hash));
    out << "config_hash = " << hash << "\n";
    out << "version = " << version << "\n";
    out << "wall_ms = " << bundle.wall_ms << "\n";
    if (!out) throw IoError("write failed on '" + path + "'");
}

void emit_plot_data(const ReportBundle& bundle) {
    if (bundle.series.empty()) {
        std::cerr << "warning: no series to plot, skipping plot data\n";
        return;
    }
    std::filesystem::path plot_dir = std::filesystem::path(bundle.dir) / "plot";
    std::error_code ec;
    std::filesystem::create_directories(plot_dir, ec);
    if (ec) throw IoError("cannot create '" + plot_dir.string() + "': " + ec.message());

    std::ofstream stub(plot_dir / "plot.gp", std::ios::trunc);
    if (!stub) throw IoError("cannot open plot stub");
    stub << "# Column listing for the .dat files in this directory.\n";
    stub << "# Load into gnuplot or any columnar plotting tool.\n";
    for (const auto& s : bundle.series) {
        std::string fname = s.name + ".dat";
        std::ofstream out(plot_dir / fname, std::ios::trunc);
        if (!out) throw IoError("cannot open plot file '" + fname + "'");
        out << "#";
        for (const auto& c : s.columns) out << " " << c;
        out << "\n";
        for (const auto& r : s.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << fmt_g17(r[i]);
            out << "\n";
        }
        if (!out) throw IoError("write failed on plot file '" + fname + "'");
        stub << "# " << fname << ":";
        for (std::size_t i = 0; i < s.columns.size(); ++i) stub << " " << (i + 1) << "=" << s.columns[i];
        stub << "\n";
        stub << "# plot '" << fname << "' using 1:2\n";
    }
}

namespace {

nlohmann::json point_json(const TorusPoint& p) {
    nlohmann::json j;
    j["hex"] = to_hex(p);
    std::vector<double> coords;
    for (int i = 0; i < p.dim(); ++i) coords.push_back(p[i].to_double());
    j["value"] = coords;
    return j;
}

}  // namespace

std::string relation_query_json(const RelationQuery& q) {
    nlohmann::json j;
    j["x"] = point_json(q.x);
    j["y"] = point_json(q.y);
    j["d"] = q.d;
    j["delta"] = q.delta;
    j["n_max"] = q.n_max;
    j["ball_grid"] = q.ball_grid;
    return j.dump();
}

std::string relation_verdict_json(const RelationVerdict& v) {
    nlohmann::json j;
    j["status"] = v.status == RelationStatus::Witnessed ? "witnessed" : "refuted_at_budget";
    j["residual"] = v.residual;
    j["best_times"] = v.best_times;
    if (v.witness) {
        nlohmann::json w;
        w["x"] = point_json(v.witness->xp);
        w["y"] = point_json(v.witness->yp);
        w["times"] = v.witness->times;
        if (!v.witness->hits.empty()) {
            nlohmann::json hits = nlohmann::json::array();
            for (const auto& h : v.witness->hits) hits.push_back(point_json(h));
            w["hits"] = hits;
        }
        j["witness"] = w;
    }
    return j.dump();
}

}  // namespace apdyn
