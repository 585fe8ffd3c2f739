#include "qdl/expansion.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qdl/arith.hpp"
#include "qdl/errors.hpp"
#include "qdl/parallel.hpp"
#include "qdl/phasor.hpp"
#include "qdl/quadrature.hpp"

namespace qdl::expansion {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kGamma = std::numbers::egamma;
constexpr double kLog2 = std::numbers::ln2;

// Gauss-Legendre nodes on [a, b] split into panels no wider than width.
void append_nodes(double a, double b, double width, std::vector<double>& x, std::vector<double>& wt) {
    if (!(b > a)) return;
    const auto& gl = quad::gauss_legendre20();
    const auto panels = static_cast<std::size_t>(std::ceil((b - a) / width));
    const double h = (b - a) / panels;
    for (std::size_t k = 0; k < panels; ++k) {
        const double c = a + (k + 0.5) * h;
        for (std::size_t i = 0; i < gl.nodes().size(); ++i) {
            x.push_back(c + 0.5 * h * gl.nodes()[i]);
            wt.push_back(0.5 * h * gl.weights()[i]);
        }
    }
}

double zeta_logderiv_two() {
    const auto [z, dz] = special::zeta_with_deriv(cplx(2.0));
    return (dz / z).real();
}
}  // namespace

double term_main(const TestFunction& phi) { return phi.phi_hat(0.0) + phi.phi_hat_integral_above(1.0); }

double katz_sarnak(const TestFunction& phi) {
    const double top = std::min(1.0, phi.sigma());
    const auto& gl = quad::gauss_legendre20();
    const double inner = gl.integrate([&](double u) { return phi.phi_hat(u); }, 0.0, top, 16);
    return phi.phi_hat(0.0) - inner;  // half of the symmetric integral over [-1, 1]
}

double term_weight_log(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam) {
    return phi.phi_hat(0.0) / fam.L * (kLog2 + 1.0 - kGamma + w.mellin_logderiv_at_one());
}

double gamma_integrand(double x, const TestFunction& phi, const FamilyParams& fam) {
    if (x <= 0.0) throw DomainError("gamma_integrand needs x > 0");
    return (phi.phi_hat(0.0) - phi.phi_hat(x / fam.L)) / (2.0 * std::sinh(0.5 * x) * fam.L);
}

double term_gamma_integral(const TestFunction& phi, const FamilyParams& fam, double extra) {
    const double edge = phi.sigma() * fam.L, S = edge + extra;
    std::vector<double> x, wt;
    append_nodes(0.0, edge, 0.25, x, wt);
    append_nodes(edge, S, 0.25, x, wt);
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) sum += wt[k] * gamma_integrand(x[k], phi, fam);
    // beyond S: phi-hat = 0 and int_S^inf 1/(2 sinh(x/2)) dx = -log tanh(S/4)
    return sum - phi.phi_hat(0.0) / fam.L * std::log(std::tanh(0.25 * S));
}

double term_prime_sum(const TestFunction& phi, const FamilyParams& fam) {
    const double lq = 0.5 * phi.sigma() * fam.L;
    if (lq < std::log(3.0)) return 0.0;
    const double Q = std::exp(lq);
    if (Q > kPrimeSumSieveBound) {
        std::ostringstream msg;
        msg << "prime sum needs primes up to " << Q << " (limit " << kPrimeSumSieveBound << ")";
        throw ResourceError(msg.str());
    }
    double sum = 0.0;
    for (auto p32 : arith::primes_upto(static_cast<std::uint64_t>(Q))) {
        if (p32 == 2) continue;
        const double p = p32, lp = std::log(p);
        double pj = p;
        for (int j = 1; pj <= Q; ++j, pj *= p) sum += lp / pj / (1.0 + 1.0 / p) * phi.phi_hat(2.0 * j * lp / fam.L);
    }
    return -2.0 / fam.L * sum;
}

double term_prime_sum_direct(const TestFunction& phi, const FamilyParams& fam) {
    const double Q = std::exp(0.5 * phi.sigma() * fam.L);
    if (Q > kPrimeSumSieveBound) throw ResourceError("prime sum range exceeds the sieve limit");
    const auto N = static_cast<std::size_t>(Q);
    if (N < 3) return 0.0;
    // smallest prime factor table; n = p^j exactly when n / p^v(n) == 1
    std::vector<std::uint32_t> spf(N + 1, 0);
    for (std::size_t i = 2; i <= N; ++i)
        if (!spf[i])
            for (std::size_t m = i; m <= N; m += i)
                if (!spf[m]) spf[m] = static_cast<std::uint32_t>(i);
    double sum = 0.0;
    for (std::size_t n = 3; n <= N; n += 2) {
        const std::size_t p = spf[n];
        std::size_t m = n;
        while (m % p == 0) m /= p;
        if (m != 1) continue;
        const double lam = std::log(static_cast<double>(p));
        sum += lam * p / ((p + 1.0) * n) * phi.phi_hat(2.0 * std::log(static_cast<double>(n)) / fam.L);
    }
    return -2.0 / fam.L * sum;
}

Estimate term_prime_sum_hybrid(const TestFunction& phi, const FamilyParams& fam, double split) {
    const double lq = 0.5 * phi.sigma() * fam.L;
    if (std::exp(lq) <= split) return {term_prime_sum(phi, fam), 0.0};
    if (split > kPrimeSumSieveBound || split < 599.0) throw ConfigError("hybrid split outside [599, sieve limit]");
    double sum = 0.0;
    const double ls = std::log(split);
    for (auto p32 : arith::primes_upto(static_cast<std::uint64_t>(split))) {
        if (p32 == 2) continue;
        const double p = p32, lp = std::log(p);
        double pj = p;
        for (int j = 1; j * lp <= lq; ++j, pj *= p) sum += lp / pj / (1.0 + 1.0 / p) * phi.phi_hat(2.0 * j * lp / fam.L);
    }
    // primes above the split: theta(t) ~ t, so sum log p F(p) ~ int F(t) dt with t = e^v
    const auto& gl = quad::gauss_legendre20();
    const auto panels = static_cast<int>(std::ceil((lq - ls) / 0.25));
    sum += gl.integrate([&](double v) { return phi.phi_hat(2.0 * v / fam.L) / (1.0 + std::exp(-v)); }, ls, lq,
                        panels);
    // |theta(t) - t| < sqrt(t) log^2 t / 8 pi (t >= 599, RH); integrate by parts against F and F'
    double m1 = 0.0;
    const double du = phi.sigma() / 2000.0;
    for (int k = 0; k < 2000; ++k)
        m1 = std::max(m1, std::abs(phi.phi_hat((k + 1) * du) - phi.phi_hat(k * du)) / du);
    const double m0 = phi.phi_hat(0.0);
    const double rh = (m0 + 2.0 * m1 / fam.L) * 3.0 * ls * ls / (8.0 * kPi * std::sqrt(split));
    const double higher = 2.0 * m0 / split;  // p^j with j >= 2 and p above the split
    return {-2.0 / fam.L * sum, 2.0 / fam.L * (rh + higher)};
}

Estimate lemma41_lhs_contour(const TestFunction& phi, const FamilyParams& fam) {
    return ratios::lemma41_line(phi, fam, fam.c_prime);
}

double j_bracket(const WeightFunction& w) {
    return -(7.0 / 3.0) * kLog2 - 1.0 - kGamma + 2.0 * zeta_logderiv_two() - w.mellin_logderiv_at_one();
}

double j_asymptotic(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam) {
    return phi.phi_hat(1.0) / fam.L * j_bracket(w);
}

double lemma45_rhs(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam) {
    return 0.5 * phi.phi0() - (phi.phi_hat(0.0) - katz_sarnak(phi)) + j_asymptotic(phi, w, fam);
}

Estimate big_I(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam) {
    return ratios::dual_line(phi, w, fam, fam.c_prime);
}

cplx plancherel_lhs(cplx z, const WeightFunction& w) {
    return special::zeta(z + 1.0) * w.mellin_g_hat(z + 1.0, 1e-14);
}

cplx plancherel_rhs(cplx z, const WeightFunction& w) { return special::zeta(-z) * w.mellin_g(-z); }

// ------------------------------------------------------------------ J(X)

namespace {
constexpr double kJUmax = 110.0;  // integrands decay like exp(-pi u / 8)

// (1/pi) int_0^inf Re f(u) du by the trapezoid rule on u = k du; also returns |T(du) - T(2 du)|
std::pair<double, double> half_line(const std::vector<cplx>& f, double du) {
    double fine = 0.5 * f[0].real(), coarse = 0.5 * f[0].real();
    for (std::size_t k = 1; k < f.size(); ++k) {
        fine += f[k].real();
        if (k % 2 == 0) coarse += f[k].real();
    }
    fine *= du / kPi;
    coarse *= 2.0 * du / kPi;
    const double tail = 8.0 / kPi * std::abs(f.back()) / kPi;
    return {fine, std::abs(fine - coarse) + tail};
}

cplx two_pow(cplx s) { return std::exp(s * kLog2); }

double h_constant(const WeightFunction& w) { return 3.0 * special::zeta(cplx(2.0)).real() / w.w_hat(0.0); }
}  // namespace

JResult j_exact(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam) {
    const double L = fam.L, sigma = phi.sigma();
    JResult out;

    // branch 1 on Re z = 3/2: nearest singularity is the pole of zeta(z) at z = 1
    if (sigma > 1.0) {
        constexpr double c = 1.5, du = 0.05;
        const auto n = static_cast<std::size_t>(kJUmax / du) + 1;
        std::vector<double> tau, wt;
        append_nodes(0.0, (sigma - 1.0) * L, 0.25, tau, wt);
        std::vector<double> fq(tau.size()), am(tau.size());
        for (std::size_t j = 0; j < tau.size(); ++j) {
            fq[j] = 0.5 * tau[j];
            am[j] = wt[j] * phi.phi_hat(1.0 + tau[j] / L) * std::exp(-0.5 * (c - 1.0) * tau[j]);
        }
        const auto Phi = phasor_grid(fq, am, 0.0, du, n);

        // M g-hat(z) = int e^{zv} g-hat(e^v) dv
        std::vector<double> v, vw;
        append_nodes(-30.0, std::log(w.g_hat_grid().x_max()), 0.1, v, vw);
        std::vector<double> fv(v.size()), av(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            fv[j] = -v[j];
            av[j] = vw[j] * std::exp(c * v[j]) * w.g_hat(std::exp(v[j]));
        }
        const auto Mgh = phasor_grid(fv, av, 0.0, du, n);

        std::vector<cplx> f(n);
        par::for_each_index(n, [&](std::size_t k) {
            const cplx z(c, k * du);
            const cplx K = (1.0 / two_pow(z) - 1.0) * special::zeta(z) /
                           ((1.0 - 1.0 / two_pow(1.0 + z)) * special::zeta(1.0 + z));
            f[k] = K * Mgh[k] * Phi[k];
        });
        const auto [val, err] = half_line(f, du);
        out.branch1 = val;
        out.error += err;
    }

    // branch 2 on Re z = -5/4: zeta(-z) pole at z = -1 and zeta(2+z) zeros sit 1/4 away
    {
        constexpr double c = -1.25, du = 0.025;
        const auto n = static_cast<std::size_t>(kJUmax / du) + 1;
        std::vector<double> tau, wt;
        const double lo = std::max(0.0, (1.0 - sigma) * L), hi = (1.0 + sigma) * L;
        append_nodes(lo, std::max(lo, L), 0.25, tau, wt);  // phi-hat(1 - tau/L) kinks at tau = L
        append_nodes(std::max(lo, L), hi, 0.25, tau, wt);
        std::vector<double> fq(tau.size()), am(tau.size());
        for (std::size_t j = 0; j < tau.size(); ++j) {
            fq[j] = -0.5 * tau[j];
            am[j] = wt[j] * phi.phi_hat(1.0 - tau[j] / L) * std::exp(0.5 * c * tau[j]);
        }
        const auto Phi = phasor_grid(fq, am, 0.0, du, n);
        std::vector<cplx> f(n);
        par::for_each_index(n, [&](std::size_t k) {
            const cplx z(c, k * du);
            const cplx K = (1.0 / two_pow(z + 1.0) - 1.0) * special::zeta(-z) /
                           ((1.0 - 1.0 / two_pow(z + 2.0)) * special::zeta(2.0 + z));
            f[k] = K * w.mellin_g(-z) * Phi[k];
        });
        const auto [val, err] = half_line(f, du);
        out.branch2 = val;
        out.error += err;
    }

    const double C = h_constant(w) / L;
    out.branch1 *= C;
    out.branch2 *= C;
    out.error *= C;
    out.value = out.branch1 + out.branch2;
    return out;
}

double h2_direct(double x, const WeightFunction& w) {
    if (!(x > 0.0)) throw DomainError("h2 needs x > 0");
    const auto S = static_cast<std::size_t>(std::max(2000.0, 200.0 * x));
    const auto mu = arith::mobius_table(S);
    double sum = 0.0, musum = 0.0;
    for (std::size_t s = 1; s <= S; s += 2) {
        if (!mu[s]) continue;
        const double m = mu[s] / (double(s) * s);
        sum += m * (0.5 * w.g(x / (2.0 * s)) - w.g(x / s));
        musum += m;
    }
    // s > S: the bracket is -1/2 + O((x/s)^4); sum over odd s of mu(s)/s^2 is 4/(3 zeta(2))
    const double full = 4.0 / (3.0 * special::zeta(cplx(2.0)).real());
    return h_constant(w) * (sum - 0.5 * (full - musum));
}

double h2_mellin(double x, const WeightFunction& w) {
    if (!(x > 0.0)) throw DomainError("h2 needs x > 0");
    constexpr double c = -1.25, du = 0.025;
    const auto n = static_cast<std::size_t>(kJUmax / du) + 1;
    std::vector<cplx> f(n);
    const double lx = std::log(x);
    par::for_each_index(n, [&](std::size_t k) {
        const cplx z(c, k * du);
        f[k] = (1.0 / two_pow(z + 1.0) - 1.0) / ((1.0 - 1.0 / two_pow(z + 2.0)) * special::zeta(2.0 + z)) *
               w.mellin_g(-z) * std::exp(z * lx);
    });
    return h_constant(w) * half_line(f, du).first;
}

DensityReport expansion_density(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam,
                                JMode mode) {
    DensityReport rep;
    rep.method = "expansion";
    rep.add_term("main", term_main(phi));
    rep.add_term("weight_log", term_weight_log(phi, w, fam));
    rep.add_term("gamma_integral", term_gamma_integral(phi, fam));
    double budget = 1e-13;
    const double Q = std::exp(0.5 * phi.sigma() * fam.L);
    if (Q <= kPrimeSumSieveBound) {
        rep.add_term("prime_sum", term_prime_sum(phi, fam));
    } else {
        const auto ps = term_prime_sum_hybrid(phi, fam);
        rep.add_term("prime_sum", ps.value.real());
        budget += ps.error;
        rep.add_error("prime_sum", ps.error);
        rep.diagnostics.push_back("prime sum: exact to 1e8, prime number theorem integral beyond (RH error bound)");
    }
    if (mode == JMode::exact) {
        const auto j = j_exact(phi, w, fam);
        rep.add_term("J", j.value);
        budget += j.error;
        rep.add_error("J", j.error);
    } else {
        rep.add_term("J", j_asymptotic(phi, w, fam));
        rep.diagnostics.push_back("J asymptotic: O(L^-2) remainder not included in the budget");
    }
    rep.finalize();
    rep.error_budget = budget;
    rep.add_error("rounding", 1e-13);
    rep.add_param("X", fam.X);
    rep.add_param("L", fam.L);
    rep.add_param("w", w.name());
    rep.add_param("phi", phi.name());
    rep.add_param("sigma", phi.sigma());
    rep.add_param("j_mode", std::string(mode == JMode::exact ? "exact" : "asym"));
    rep.add_param("prime_cutoff", Q);
    return rep;
}

}  // namespace qdl::expansion
