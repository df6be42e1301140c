#pragma once

// Report serialization. CSV columns print 6 decimals (documented rounding);
// JSON carries full double precision. Files contain no wall-clock data so
// byte-identical reruns stay byte-identical; timing goes to stderr.

#include "oilab/infometrics.hpp"
#include "oilab/simulator.hpp"

#include <string>
#include <vector>

namespace oilab {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct ReportMeta {
    std::string tool = "oilab";
    std::string command;
    std::string problem;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string kernel_backend;
    double table_tolerance = 0.0;  // populated by the tables command
};

struct StageRow {
    std::string stage;
    MetricsRow metrics;
    double p_success = 0.0;
    std::uint64_t digest = 0;
};

std::string format_csv_value(double v);

std::string stage_rows_csv(const std::vector<StageRow>& rows);
std::string stage_rows_json(const ReportMeta& meta, const std::vector<StageRow>& rows);

void write_file(const std::string& path, const std::string& content);

} // namespace oilab
