#include "oilab/reportio.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oilab {

std::string format_csv_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string stage_rows_csv(const std::vector<StageRow>& rows) {
    std::ostringstream out;
    out << "stage,H_Y,S_rhoY,C,H_Y_given_J,chi,I_JY,D_Y,irrealism,lower_bound,upper_bound,"
           "p_success,digest\n";
    for (const StageRow& r : rows) {
        out << r.stage;
        for (double v : {r.metrics.H_Y, r.metrics.S_rhoY, r.metrics.C, r.metrics.H_Y_given_J,
                         r.metrics.chi, r.metrics.I_JY, r.metrics.D_Y, r.metrics.irrealism,
                         r.metrics.lower_bound, r.metrics.upper_bound, r.p_success})
            out << ',' << format_csv_value(v);
        out << ',' << r.digest << '\n';
    }
    return out.str();
}

namespace {

nlohmann::ordered_json meta_json(const ReportMeta& meta) {
    nlohmann::ordered_json j;
    j["tool"] = meta.tool;
    j["version"] = kLibraryVersion;
    j["command"] = meta.command;
    if (!meta.problem.empty()) j["problem"] = meta.problem;
    j["seed"] = meta.seed;
    j["threads"] = meta.threads;
    j["kernel_backend"] = meta.kernel_backend;
    j["tolerances"] = {{"hermitian", kHermTol},
                       {"trace", kTraceTol},
                       {"eig_clamp", kEigClamp},
                       {"psd_slack", kPsdSlack}};
    if (meta.table_tolerance > 0.0) j["table_tolerance"] = meta.table_tolerance;
    return j;
}

nlohmann::ordered_json metrics_json(const MetricsRow& m) {
    nlohmann::ordered_json j;
    j["H_Y"] = m.H_Y;
    j["S_rhoY"] = m.S_rhoY;
    j["C"] = m.C;
    j["H_Y_given_J"] = m.H_Y_given_J;
    j["chi"] = m.chi;
    j["I_JY"] = m.I_JY;
    j["D_Y"] = m.D_Y;
    j["irrealism"] = m.irrealism;
    j["lower_bound"] = m.lower_bound;
    j["upper_bound"] = m.upper_bound;
    return j;
}

} // namespace

std::string stage_rows_json(const ReportMeta& meta, const std::vector<StageRow>& rows) {
    nlohmann::ordered_json j;
    j["meta"] = meta_json(meta);
    j["rows"] = nlohmann::ordered_json::array();
    for (const StageRow& r : rows) {
        nlohmann::ordered_json row = metrics_json(r.metrics);
        row["stage"] = r.stage;
        row["p_success"] = r.p_success;
        row["digest"] = r.digest;
        j["rows"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path);
}

} // namespace oilab
