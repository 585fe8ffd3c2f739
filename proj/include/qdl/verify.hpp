#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qdl::verify {

struct Residual {
    std::string label;
    double value = 0.0;
    double tol = 0.0;  // passes when value <= tol
    bool ok() const { return value <= tol; }  // NaN fails
};

struct Params {
    double X = 0.0;           // 0: the check's own X (or X ladder)
    std::string phi;          // empty: the check's default
    std::string w = "gaussian";
    double c_prime = 0.0;     // 0: the check's own c' list
    std::uint64_t seed = 1;
};

struct Result {
    std::string name;
    bool passed = false;
    std::vector<Residual> residuals;                      // gated
    std::vector<std::pair<std::string, double>> values;   // reported only
    std::vector<std::string> diagnostics;
};

const std::vector<std::string>& names();
// Throws ConfigError for unknown names.
Result run(const std::string& name, const Params& p = {});

}  // namespace qdl::verify
