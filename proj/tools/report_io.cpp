#include "report_io.hpp"

#include <iomanip>
#include <limits>

namespace qdl::cli {

namespace {

void stamp(json& j, const RunInfo& info) {
    j["tool_version"] = QDL_VERSION;
    j["config"] = info.config;
    j["wall_time_s"] = info.wall_time;
}

// JSON has no NaN/inf; keep them visible as strings
json num(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

void csv_num(std::ostream& os, double v) { os << std::setprecision(17) << (v == 0.0 ? 0.0 : v); }

}  // namespace

json to_json(const DensityReport& r, const RunInfo& info) {
    json j;
    j["value"] = num(r.value);
    j["method"] = r.method;
    j["terms"] = json::object();
    for (const auto& [k, v] : r.terms) j["terms"][k] = num(v);
    j["error_budget"] = num(r.error_budget);
    j["params"] = json::object();
    for (const auto& [k, v] : r.params)
        std::visit([&](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>) j["params"][k] = num(x);
            else j["params"][k] = x;
        }, v);
    json d;
    d["messages"] = r.diagnostics;
    d["term_errors"] = json::object();
    for (const auto& [k, v] : r.term_errors) d["term_errors"][k] = num(v);
    j["diagnostics"] = d;
    stamp(j, info);
    return j;
}

json to_json(const verify::Result& r, const RunInfo& info) {
    json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["residuals"] = json::array();
    for (const auto& x : r.residuals)
        j["residuals"].push_back({{"label", x.label}, {"value", num(x.value)}, {"tol", x.tol}, {"ok", x.ok()}});
    j["values"] = json::object();
    for (const auto& [k, v] : r.values) j["values"][k] = num(v);
    j["diagnostics"] = r.diagnostics;
    stamp(j, info);
    return j;
}

void write_csv(std::ostream& os, const DensityReport& r) {
    os << "name,value\n";
    os << "value,";
    csv_num(os, r.value);
    os << "\nerror_budget,";
    csv_num(os, r.error_budget);
    os << '\n';
    for (const auto& [k, v] : r.terms) {
        os << k << ',';
        csv_num(os, v);
        os << '\n';
    }
}

void write_csv(std::ostream& os, const verify::Result& r) {
    os << "label,value,tol,ok\n";
    for (const auto& x : r.residuals) {
        os << '"' << x.label << "\",";
        csv_num(os, x.value);
        os << ',';
        csv_num(os, x.tol);
        os << ',' << (x.ok() ? 1 : 0) << '\n';
    }
}

void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            csv_num(os, row[i]);
        }
        os << '\n';
    }
}

json to_json(const Table& t, const RunInfo& info) {
    json j;
    j["columns"] = t.header;
    j["rows"] = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (double v : row) r.push_back(num(v));
        j["rows"].push_back(r);
    }
    stamp(j, info);
    return j;
}

}  // namespace qdl::cli
