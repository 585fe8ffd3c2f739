#include "qdl/ratios.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "qdl/errors.hpp"
#include "qdl/parallel.hpp"
#include "qdl/phasor.hpp"

namespace qdl::ratios {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;
constexpr double kMargin = 1e-3;

void check_convergence(cplx s, const char* what) {
    if (!(s.real() > -0.25 + kMargin))
        throw DomainError(std::string(what) + ": real part must exceed -1/4");
}

cplx p_pow(double logp, cplx s) { return std::exp(-s * logp); }  // p^{-s}
}  // namespace

void ShiftPair::validate() const {
    if (!(std::abs(alpha.real()) < 0.25) || !(gamma_shift.real() < 0.25))
        throw DomainError("shifts need |Re alpha| < 1/4 and Re gamma < 1/4");
}

FamilyParams FamilyParams::make(double X, const testfn::WeightFunction& w, double c_prime,
                                std::uint64_t d_cutoff) {
    if (!(X > 2.0 * kPi * std::numbers::e)) throw ConfigError("X must exceed 2 pi e");
    FamilyParams f;
    f.X = X;
    f.L = std::log(X / (2.0 * kPi * std::numbers::e));
    f.c_prime = c_prime > 0.0 ? c_prime : std::clamp(1.2 / std::log(X), 0.1, 0.2);
    if (!(f.c_prime < 0.25)) throw ConfigError("c' must lie in (0, 1/4)");
    f.d_cutoff = d_cutoff ? d_cutoff : static_cast<std::uint64_t>(std::ceil(w.cutoff() * X));
    return f;
}

const PrimeTable& odd_primes(std::uint64_t P) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::unique_ptr<PrimeTable>> cache;
    std::lock_guard lk(mu);
    auto& slot = cache[P];
    if (!slot) {
        slot = std::make_unique<PrimeTable>();
        for (auto p : arith::primes_upto(P)) {
            if (p == 2) continue;
            slot->p.push_back(p);
            slot->logp.push_back(std::log(static_cast<double>(p)));
        }
    }
    return *slot;
}

Estimate A_est(cplx alpha, cplx gamma_shift, std::uint64_t P) {
    check_convergence(alpha, "A");
    check_convergence(gamma_shift, "A");
    const cplx s1 = 1.0 + 2.0 * alpha, s2 = 1.0 + alpha + gamma_shift;
    const cplx pre = (1.0 - std::exp(-s1 * kLog2)) / (1.0 - std::exp(-s2 * kLog2));
    const auto& tab = odd_primes(P);
    cplx logsum = 0.0;
    for (std::size_t i = 0; i < tab.p.size(); ++i) {
        const cplx y = p_pow(tab.logp[i], s1), z = p_pow(tab.logp[i], s2);
        logsum += std::log(1.0 + (z - y) / ((tab.p[i] + 1.0) * (1.0 - z)));
    }
    // log E_p ~ (p^{-1-s2} - p^{-1-s1}); sum over p > P by the prime number theorem
    const double lP = std::log(static_cast<double>(P));
    const cplx tail = (std::exp(-s2 * lP) / s2 - std::exp(-s1 * lP) / s1) / lP;
    return {pre * std::exp(logsum + tail), std::abs(tail) * std::abs(pre * std::exp(logsum))};
}

cplx A(cplx alpha, cplx gamma_shift) { return A_est(alpha, gamma_shift).value; }

cplx A_dual_diag(cplx r) {
    // zeta-quotient form continues past the product's region; zeros of zeta(2-2r) start at Re r = 1/2
    if (!(r.real() < 0.5)) throw DomainError("A(-r,r): need Re r < 1/2");
    const cplx q = std::exp(2.0 * r * kLog2);
    return 3.0 * (2.0 - q) * special::zeta(2.0) / ((4.0 - q) * special::zeta(2.0 - 2.0 * r));
}

Estimate A_alpha_diag_est(cplx r, std::uint64_t P) {
    check_convergence(r, "A_alpha");
    const cplx s = 1.0 + 2.0 * r;
    cplx sum = kLog2 / (std::exp(s * kLog2) - 1.0);
    const auto& tab = odd_primes(P);
    for (std::size_t i = 0; i < tab.p.size(); ++i)
        sum += tab.logp[i] / ((tab.p[i] + 1.0) * (std::exp(s * tab.logp[i]) - 1.0));
    const cplx tail = std::exp(-s * std::log(static_cast<double>(P))) / s;
    return {sum + tail, std::abs(tail)};
}

cplx A_alpha_diag(cplx r) { return A_alpha_diag_est(r).value; }

cplx A_alpha_diag_truncated(cplx r, std::uint64_t P) {
    check_convergence(r, "A_alpha");
    const cplx s = 1.0 + 2.0 * r;
    cplx sum = kLog2 / (std::exp(s * kLog2) - 1.0);
    if (P < 3) return sum;
    const auto& tab = odd_primes(P);
    for (std::size_t i = 0; i < tab.p.size(); ++i)
        sum += tab.logp[i] / ((tab.p[i] + 1.0) * (std::exp(s * tab.logp[i]) - 1.0));
    return sum;
}

special::GammaRatio X_d(const arith::QuadraticCharacter& chi, cplx s) {
    const double a = chi.parity();
    auto g = special::gamma_ratio(0.5 * (1.0 + a - s), 0.5 * (a + s));
    if (!g.infinite)
        g.value *= std::exp((s - 0.5) * std::log(kPi / (8.0 * std::abs(static_cast<double>(chi.d())))));
    return g;
}

// ---------------------------------------------------------------- family

Family::Family(const testfn::WeightFunction& w, const FamilyParams& fam) {
    const auto ns = arith::odd_squarefree_upto(fam.d_cutoff);
    logn_.reserve(ns.size());
    wt_.reserve(ns.size());
    for (auto n : ns) {
        const double wn = w.w(static_cast<double>(n) / fam.X);
        if (wn == 0.0) continue;
        logn_.push_back(std::log(static_cast<double>(n)));
        wt_.push_back(wn);
    }
    const double half = par::chunked_sum<double>(wt_.size(), kPhasorChunk, [&](std::size_t k) { return wt_[k]; });
    if (!(half > 0.0)) throw DomainError("empty family");
    total_ = 2.0 * half;
    for (auto& v : wt_) v /= half;
}

cplx Family::power_average(cplx r) const {
    return par::chunked_sum<cplx>(wt_.size(), kPhasorChunk,
                                  [&](std::size_t k) { return wt_[k] * std::exp(-r * logn_[k]); });
}

std::vector<cplx> Family::power_average_grid(double c, double t0, double dt, std::size_t count) const {
    std::vector<double> amp(wt_.size());
    for (std::size_t k = 0; k < wt_.size(); ++k) amp[k] = wt_[k] * std::exp(-c * logn_[k]);
    return phasor_grid(logn_, amp, t0, dt, count);
}

double Family::log_conductor_average() const {
    const double base = std::log(8.0 / kPi);
    return base + par::chunked_sum<double>(wt_.size(), kPhasorChunk,
                                           [&](std::size_t k) { return wt_[k] * logn_[k]; });
}

std::shared_ptr<const Family> family_for(const testfn::WeightFunction& w, const FamilyParams& fam) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const Family>> cache;
    std::ostringstream key;
    key.precision(17);
    key << w.name() << '|' << w.amplitude() << '|' << fam.X << '|' << fam.d_cutoff;
    {
        std::lock_guard lk(mu);
        if (auto it = cache.find(key.str()); it != cache.end()) return it->second;
    }
    auto f = std::make_shared<const Family>(w, fam);
    std::lock_guard lk(mu);
    if (cache.size() > 16) cache.clear();
    return cache.emplace(key.str(), f).first->second;
}

double weight_total(const testfn::WeightFunction& w, const FamilyParams& fam) {
    return family_for(w, fam)->total_weight();
}

cplx family_average_power(cplx r, const testfn::WeightFunction& w, const FamilyParams& fam,
                          AverageMethod method) {
    if (r.real() < 0.0 || r.real() > 0.5) throw DomainError("family_average_power needs 0 <= Re r <= 1/2");
    if (method == AverageMethod::exact) return family_for(w, fam)->power_average(r);
    return 2.0 / w.w_hat(0.0) * std::exp(-r * std::log(fam.X)) * w.mellin(1.0 - r);
}

cplx dual_factor_average(cplx r, cplx power_avg) {
    cplx g = 0.0;
    for (int a = 0; a <= 1; ++a) {
        const auto q = special::gamma_ratio(0.5 * (0.5 + a - r), 0.5 * (0.5 + a + r));
        if (q.infinite) throw PoleError("X_d(1/2+r) at a gamma pole");
        g += 0.5 * q.value;
    }
    return std::exp(r * std::log(kPi / 8.0)) * g * power_avg;
}

cplx ratios_rhs(const ShiftPair& sh, const testfn::WeightFunction& w, const FamilyParams& fam) {
    sh.validate();
    const cplx a = sh.alpha, g = sh.gamma_shift;
    if (std::abs(a + g) < 1e-14) throw PoleError("alpha + gamma = 0: zeta(1 + alpha + gamma) at its pole");
    if (std::abs(a.imag()) > fam.X || std::abs(g.imag()) > fam.X) throw DomainError("|Im shift| > X");
    const cplx first = special::zeta(1.0 + 2.0 * a) / special::zeta(1.0 + a + g) * A(a, g);
    if (a == g) return first;  // 1/zeta(1) kills the dual term
    const cplx F = family_for(w, fam)->power_average(a);
    const cplx dual = dual_factor_average(a, F) * special::zeta(1.0 - 2.0 * a) /
                      special::zeta(1.0 - a + g) * A(-a, g);
    return first + dual;
}

cplx logderiv_avg(cplx r, const testfn::WeightFunction& w, const FamilyParams& fam, std::uint64_t P) {
    if (r == 0.0) throw PoleError("r = 0: zeta(1 - 2r) pole; use the combined integrand");
    if (!(r.real() > 0.0 && r.real() < 0.25)) throw DomainError("logderiv_avg needs 0 < Re r < 1/4");
    const cplx F = family_for(w, fam)->power_average(r);
    return special::zeta_logderiv(1.0 + 2.0 * r) + A_alpha_diag_est(r, P).value -
           dual_factor_average(r, F) * special::zeta(1.0 - 2.0 * r) * A_dual_diag(r);
}

double digamma_average(double t) {
    return 0.5 * (special::digamma(cplx(0.25, 0.5 * t)).real() +
                  special::digamma(cplx(0.75, 0.5 * t)).real());
}

}  // namespace qdl::ratios
