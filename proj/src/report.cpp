#include "qdl/report.hpp"

#include <algorithm>

#include "qdl/errors.hpp"

namespace qdl {

double DensityReport::term(const std::string& name) const {
    auto it = std::find_if(terms.begin(), terms.end(), [&](auto& t) { return t.first == name; });
    if (it == terms.end()) throw Error("no term named " + name);
    return it->second;
}

double DensityReport::sum_of_terms() const {
    // fixed order, compensated
    double s = 0.0, c = 0.0;
    for (const auto& [_, v] : terms) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

}  // namespace qdl
