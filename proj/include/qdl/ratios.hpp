#pragma once
// Ratios-conjecture side: the Euler product A, its diagonal derivative, the
// functional-equation factor X_d, family averages over d, and the
// one-level-density prediction integral.

#include <cstdint>
#include <memory>
#include <vector>

#include "qdl/arith.hpp"
#include "qdl/report.hpp"
#include "qdl/special.hpp"
#include "qdl/testfn.hpp"

namespace qdl::ratios {

using special::cplx;

inline constexpr std::uint64_t kDefaultPrimeCutoff = 1'000'000;

struct ShiftPair {
    cplx alpha;
    cplx gamma_shift;
    void validate() const;  // |Re alpha| < 1/4, Re gamma < 1/4
};

struct FamilyParams {
    double X = 0.0;
    double L = 0.0;  // log(X / (2 pi e))
    std::uint64_t d_cutoff = 0;
    double c_prime = 0.0;

    // c_prime <= 0 picks 1.2/log X clamped to [0.1, 0.2]; d_cutoff = 0 picks where w(d/X) < 1e-16.
    static FamilyParams make(double X, const testfn::WeightFunction& w, double c_prime = 0.0,
                             std::uint64_t d_cutoff = 0);
};

struct Estimate {
    cplx value;
    double error = 0.0;  // tail bound of the truncated prime product/sum
};

// Primes 3 <= p <= P and their logs, cached per P.
struct PrimeTable {
    std::vector<double> p;
    std::vector<double> logp;
};
const PrimeTable& odd_primes(std::uint64_t P);

Estimate A_est(cplx alpha, cplx gamma_shift, std::uint64_t P = kDefaultPrimeCutoff);
cplx A(cplx alpha, cplx gamma_shift);
// A(-r, r) from its zeta-quotient form
cplx A_dual_diag(cplx r);

Estimate A_alpha_diag_est(cplx r, std::uint64_t P = kDefaultPrimeCutoff);
cplx A_alpha_diag(cplx r);
// Only odd primes p <= P (plus p = 2), no tail: exact inside integrals against
// phi(iLr/2pi) once P >= exp(sigma L / 2).
cplx A_alpha_diag_truncated(cplx r, std::uint64_t P);

special::GammaRatio X_d(const arith::QuadraticCharacter& chi, cplx s);

// Family over signed odd squarefree d with weight w(d/X); stored as the
// positive n = |d| (both signs carry the same weight).
class Family {
public:
    Family(const testfn::WeightFunction& w, const FamilyParams& fam);
    std::size_t size() const { return logn_.size(); }
    const std::vector<double>& weights() const { return wt_; }  // normalized: sum = 1
    const std::vector<double>& log_n() const { return logn_; }
    double total_weight() const { return total_; }  // W*
    cplx power_average(cplx r) const;  // <|d|^{-r}>
    // <|d|^{-(c + i t_k)}>, t_k = t0 + k dt, k < count
    std::vector<cplx> power_average_grid(double c, double t0, double dt, std::size_t count) const;
    double log_conductor_average() const;  // <log(8|d|/pi)>

private:
    std::vector<double> logn_, wt_;
    double total_ = 0.0;
};
std::shared_ptr<const Family> family_for(const testfn::WeightFunction& w, const FamilyParams& fam);

double weight_total(const testfn::WeightFunction& w, const FamilyParams& fam);

enum class AverageMethod { exact, mellin };
cplx family_average_power(cplx r, const testfn::WeightFunction& w, const FamilyParams& fam,
                          AverageMethod method);
// <X_d(1/2 + r)> given <|d|^{-r}>
cplx dual_factor_average(cplx r, cplx power_avg);

cplx ratios_rhs(const ShiftPair& shifts, const testfn::WeightFunction& w, const FamilyParams& fam);
cplx logderiv_avg(cplx r, const testfn::WeightFunction& w, const FamilyParams& fam,
                  std::uint64_t P = kDefaultPrimeCutoff);

// Parity-averaged digamma part of the integrand:
// (1/4) sum_a [psi(1/4 + (a - it)/2) + psi(1/4 + (a + it)/2)]
double digamma_average(double t);
// (1/2pi) int_R digamma_average(t) phi(tL/2pi) dt by quadrature
Estimate digamma_integral(const testfn::TestFunction& phi, const FamilyParams& fam);

struct PredictOptions {
    double step = 0.04;          // trapezoid spacing in t
    double x_max = 0.0;          // truncation in x = tL/2pi; 0 = auto
    double exact_budget = 4e9;   // cap on (#d) * (#t) for exact d-averages
    double tol = 0.0;            // 0 = no accuracy requirement
};

DensityReport predict_density(const testfn::TestFunction& phi, const testfn::WeightFunction& w,
                              const FamilyParams& fam, const PredictOptions& opt = {});
// Same integrand on Re r = c' (needs the entire extension of phi)
DensityReport predict_density_contour(const testfn::TestFunction& phi,
                                      const testfn::WeightFunction& w, const FamilyParams& fam);
// (1/2 pi i) int_{(c)} (2 zeta'/zeta(1+2r) + 2 A_alpha(r,r)) phi(iLr/2pi) dr
Estimate lemma41_line(const testfn::TestFunction& phi, const FamilyParams& fam, double c);
// -(1/2 pi i) int_{(c)} 2 <X_d(1/2+r)> zeta(1-2r) A(-r,r) phi(iLr/2pi) dr, c > 0
Estimate dual_line(const testfn::TestFunction& phi, const testfn::WeightFunction& w,
                   const FamilyParams& fam, double c);

}  // namespace qdl::ratios
