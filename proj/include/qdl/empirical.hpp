#pragma once

#include <cstdint>
#include <vector>

#include "qdl/ratios.hpp"
#include "qdl/report.hpp"
#include "qdl/testfn.hpp"
#include "qdl/zeros.hpp"

namespace qdl::empirical {

using ratios::FamilyParams;
using ratios::weight_total;  // W* = sum over the family of w(d/X)
using testfn::TestFunction;
using testfn::WeightFunction;

// (1/W*) sum* w(d/X) chi_{8d}(n)
double char_average(std::uint64_t n, const WeightFunction& w, const FamilyParams& fam);

struct CharacterTerm {
    std::int64_t d = 0;
    double weight = 0.0;    // w(d/X)
    double zero_sum = 0.0;  // sum over +-gamma <= T of phi(gamma L / 2pi)
    double tail = 0.0;      // bound on the zeros above T
    std::size_t zeros = 0;
    bool complete = false;
};

struct EmpiricalOptions {
    double T = 40.0;
    const zeros::ZeroCache* cache = nullptr;
    int bootstrap = 20;
    std::uint64_t seed = 1;
    double max_incomplete = 0.05;  // DataQualityError above this fraction
};

// Per-character zero sums over every d in the family, in family order.
std::vector<CharacterTerm> character_terms(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam,
                                           const EmpiricalOptions& opt);

// Bound on sum over +-gamma > T of |phi(gamma L/2pi)| from the envelope and the zero density.
double zero_tail_bound(const TestFunction& phi, const FamilyParams& fam, std::int64_t d, double T);

// Weighted mean of zero_sum over complete characters.
double weighted_mean(const std::vector<CharacterTerm>& terms);
// Standard deviation of weighted_mean over resamples of the characters (with replacement).
double bootstrap_se(const std::vector<CharacterTerm>& terms, int resamples, std::uint64_t seed);

DensityReport empirical_density(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam,
                                const EmpiricalOptions& opt = {});

}  // namespace qdl::empirical
