#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdl/report.hpp"
#include "qdl/verify.hpp"

namespace qdl::cli {

using json = nlohmann::ordered_json;

// Header shared by every report: tool version, effective config, wall time.
struct RunInfo {
    json config;
    double wall_time = 0.0;
};

json to_json(const DensityReport& r, const RunInfo& info);
json to_json(const verify::Result& r, const RunInfo& info);

// name,value rows: value, error_budget, one row per term
void write_csv(std::ostream& os, const DensityReport& r);
// label,value,tol,ok rows
void write_csv(std::ostream& os, const verify::Result& r);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
void write_csv(std::ostream& os, const Table& t);
json to_json(const Table& t, const RunInfo& info);

}  // namespace qdl::cli
