#pragma once

#include "qdl/ratios.hpp"
#include "qdl/report.hpp"
#include "qdl/testfn.hpp"

namespace qdl::expansion {

using cplx = std::complex<double>;
using ratios::Estimate;
using ratios::FamilyParams;
using testfn::TestFunction;
using testfn::WeightFunction;

enum class JMode { exact, asymptotic };

// Largest e^{sigma L / 2} the exact prime sum will sieve to.
inline constexpr double kPrimeSumSieveBound = 2e8;

double term_main(const TestFunction& phi);
double katz_sarnak(const TestFunction& phi);
double term_weight_log(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam);

// (1/L) K(x) (phi-hat(0) - phi-hat(x/L)) with K(x) = 1/(2 sinh(x/2)); finite at x -> 0.
double gamma_integrand(double x, const TestFunction& phi, const FamilyParams& fam);
double term_gamma_integral(const TestFunction& phi, const FamilyParams& fam, double extra = 20.0);

// Exact enumeration of odd prime powers; ResourceError past kPrimeSumSieveBound.
double term_prime_sum(const TestFunction& phi, const FamilyParams& fam);
// Same sum written as a plain double loop over (p, j) without the closed (1+1/p)^{-1} factor.
double term_prime_sum_direct(const TestFunction& phi, const FamilyParams& fam);
// Exact below split, prime number theorem integral above; error bound assumes RH.
Estimate term_prime_sum_hybrid(const TestFunction& phi, const FamilyParams& fam, double split = 1e8);

Estimate lemma41_lhs_contour(const TestFunction& phi, const FamilyParams& fam);

// -log(2^{7/3} e^{1+gamma}) + 2 zeta'(2)/zeta(2) - Mw'(1)/Mw(1)
double j_bracket(const WeightFunction& w);
double j_asymptotic(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam);

struct JResult {
    double value = 0.0;
    double branch1 = 0.0;  // phi-hat(1 + tau/L) part
    double branch2 = 0.0;  // phi-hat(1 - tau/L) part
    double error = 0.0;
};
JResult j_exact(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam);

// h2 by its absolutely convergent Moebius sum and by the Mellin line Re z = -5/4.
double h2_direct(double x, const WeightFunction& w);
double h2_mellin(double x, const WeightFunction& w);

// zeta(z+1) M g-hat(z+1) (numeric transform) and zeta(-z) M g(-z) (closed form).
cplx plancherel_lhs(cplx z, const WeightFunction& w);
cplx plancherel_rhs(cplx z, const WeightFunction& w);

Estimate big_I(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam);
double lemma45_rhs(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam);

DensityReport expansion_density(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam,
                                JMode mode);

}  // namespace qdl::expansion
