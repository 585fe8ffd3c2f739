#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qdl {

using ParamValue = std::variant<double, std::string>;

struct DensityReport {
    double value = 0.0;
    std::string method;  // empirical | prediction | expansion
    std::vector<std::pair<std::string, double>> terms;
    double error_budget = 0.0;
    // per-component bounds; a component may cover several terms (e.g. one truncated integral)
    std::vector<std::pair<std::string, double>> term_errors;
    std::vector<std::pair<std::string, ParamValue>> params;
    std::vector<std::string> diagnostics;

    void add_term(std::string name, double v) { terms.emplace_back(std::move(name), v); }
    void add_error(std::string name, double e) { term_errors.emplace_back(std::move(name), e); }
    void add_param(std::string name, ParamValue v) { params.emplace_back(std::move(name), std::move(v)); }
    double term(const std::string& name) const;  // throws if missing
    double sum_of_terms() const;
    // value := sum of terms
    void finalize() { value = sum_of_terms(); }
};

}  // namespace qdl
