// Prediction integral for the one-level density, on the real line or on Re r = c'.
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdl/errors.hpp"
#include "qdl/parallel.hpp"
#include "qdl/phasor.hpp"
#include "qdl/quadrature.hpp"
#include "qdl/ratios.hpp"

namespace qdl::ratios {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kFejerXmax = 1000.0;

bool is_fejer(const testfn::TestFunction& phi) { return phi.kind() == testfn::TestKind::fejer; }

// Prime powers q = p^j <= exp(sigma L / 2) for the diagonal-derivative polynomial:
// 2 A_alpha(r,r) = sum 2 log p p^{-j} / (p + 1) p^{-2jr}   (p = 2 term: 2 log 2 2^{-j} ...)
void alpha_polynomial(double sigma, double L, double c, std::vector<double>& freq,
                      std::vector<double>& amp) {
    const double lq = 0.5 * sigma * L;
    if (lq <= 0.0) return;
    const double Q = std::exp(lq) * (1.0 + 1e-12);
    for (auto p32 : arith::primes_upto(static_cast<std::uint64_t>(Q))) {
        const double p = p32, lp = std::log(p);
        const double unit = p == 2.0 ? 2.0 * lp : 2.0 * lp / (p + 1.0);
        double pj = p;
        for (int j = 1; pj <= Q; ++j, pj *= p) {
            freq.push_back(2.0 * j * lp);
            amp.push_back(unit / pj * std::exp(-2.0 * j * c * lp));
        }
    }
}

double taper(double t, double t1, double t2) {
    if (t <= t1) return 1.0;
    if (t >= t2) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * (t - t1) / (t2 - t1)));
}

struct LineResult {
    double zeta = 0.0, alpha = 0.0, dual = 0.0;
    double trunc_err = 0.0;
    double t_max = 0.0, t_exact = 0.0, t_step = 0.0;
    std::size_t points = 0;
};

// (1/pi) int_0^inf Re[ term(c + it) phi(iL(c + it)/2pi) ] dt for the three
// arithmetic pieces, midpoint rule on a uniform grid.
LineResult line_terms(const testfn::TestFunction& phi, const testfn::WeightFunction* w,
                      const FamilyParams& fam, double c, const PredictOptions& opt) {
    const double L = fam.L;
    // off the real line the midpoint rule converges like exp(-2 pi dist / dt), dist being the gap to
    // the pole at r = 0 and (dual term) to the zeros of zeta(2 - 2r) on Re r = 1/4
    const double dist = c > 0.0 ? (w ? std::min(c, 0.25 - c) : c) : HUGE_VAL;
    const double dt = std::min(opt.step, dist / 5.0);
    double t2;
    if (is_fejer(phi)) t2 = 2.0 * kPi * (opt.x_max > 0 ? opt.x_max : kFejerXmax) / L;
    else t2 = 2.0 * kPi * (opt.x_max > 0 ? opt.x_max : phi.decay_radius()) / L;
    const double t1 = is_fejer(phi) ? 0.5 * t2 : t2;
    const auto n = static_cast<std::size_t>(std::ceil(t2 / dt));
    const double t0 = 0.5 * dt;  // midpoint nodes: never on t = 0

    std::vector<double> freq, amp;
    alpha_polynomial(phi.sigma(), L, c, freq, amp);
    const auto alpha_grid = phasor_grid(freq, amp, t0, dt, n);

    std::vector<cplx> F;
    std::size_t k_exact = 0;
    std::shared_ptr<const Family> fam_ptr;
    if (w) {
        fam_ptr = family_for(*w, fam);
        k_exact = std::min<std::size_t>(n, static_cast<std::size_t>(opt.exact_budget / std::max<std::size_t>(1, fam_ptr->size())));
        F = fam_ptr->power_average_grid(c, t0, dt, k_exact);
    }

    std::vector<double> vz(n), va(n), vd(n);
    const std::size_t blocks = (n + 255) / 256;
    par::for_each_index(blocks, [&](std::size_t b) {
        for (std::size_t k = b * 256; k < std::min(n, (b + 1) * 256); ++k) {
            const double t = t0 + k * dt;
            const cplx r(c, t);
            const cplx ph = c == 0.0 ? cplx(phi.phi(t * L / (2.0 * kPi)))
                                     : phi.phi_complex(cplx(0.0, L / (2.0 * kPi)) * r);
            const auto [z1, dz1] = special::zeta_with_deriv(1.0 + 2.0 * r);
            vz[k] = (2.0 * dz1 / z1 * ph).real();
            va[k] = (alpha_grid[k] * ph).real();
            if (!w) continue;
            const cplx Fk = k < k_exact ? F[k]
                                        : 2.0 / w->w_hat(0.0) * std::exp(-r * std::log(fam.X)) * w->mellin(1.0 - r);
            if (std::abs(Fk) < 1e-300) continue;
            // on the real line zeta(1 - 2it) = conj zeta(1 + 2it)
            const cplx zm = c == 0.0 ? std::conj(z1) : special::zeta(1.0 - 2.0 * r);
            vd[k] = (2.0 * dual_factor_average(r, Fk) * zm * A_dual_diag(r) * ph).real();
        }
    });
    auto integrate = [&](const std::vector<double>& v, double a, double b) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += v[k] * taper(t0 + k * dt, a, b);
        return s * dt / kPi;
    };
    LineResult out;
    out.zeta = integrate(vz, t1, t2);
    out.alpha = integrate(va, t1, t2);
    out.dual = integrate(vd, t1, t2);
    out.points = n;
    if (c > 0.0) out.trunc_err += 4.0 * phi.phi0() * std::exp(-2.0 * kPi * dist / dt);
    out.t_max = t2;
    out.t_step = dt;
    out.t_exact = w ? t0 + k_exact * dt : 0.0;
    if (is_fejer(phi)) {
        // taper-length comparison as the truncation estimate
        const double half = integrate(vz, 0.5 * t1, 0.5 * t2) + integrate(va, 0.5 * t1, 0.5 * t2) -
                            integrate(vd, 0.5 * t1, 0.5 * t2);
        out.trunc_err = std::abs(out.zeta + out.alpha - out.dual - half);
    } else {
        const double bmax = 4.0 * std::log(2.0 + t2) + 10.0;
        out.trunc_err = bmax / L * 2.0 * phi.envelope_tail(t2 * L / (2.0 * kPi));
    }
    return out;
}

DensityReport assemble(const char* form, const testfn::TestFunction& phi, const testfn::WeightFunction& w,
                       const FamilyParams& fam, double c, const PredictOptions& opt) {
    const auto fam_ptr = family_for(w, fam);
    const auto line = line_terms(phi, &w, fam, c, opt);
    const auto dg = digamma_integral(phi, fam);
    DensityReport rep;
    rep.method = "prediction";
    rep.add_term("log_conductor", fam_ptr->log_conductor_average() * phi.phi_hat(0.0) / fam.L);
    rep.add_term("digamma", dg.value.real());
    rep.add_term("zeta_logderiv", line.zeta);
    rep.add_term("A_alpha", line.alpha);
    rep.add_term("dual", -line.dual);
    rep.finalize();
    rep.error_budget = dg.error + line.trunc_err + 1e-13;
    rep.add_error("digamma", dg.error);
    rep.add_error("line_integral(zeta_logderiv,A_alpha,dual)", line.trunc_err);
    rep.add_error("rounding", 1e-13);
    rep.add_param("X", fam.X);
    rep.add_param("L", fam.L);
    rep.add_param("w", w.name());
    rep.add_param("phi", phi.name());
    rep.add_param("sigma", phi.sigma());
    rep.add_param("form", std::string(form));
    rep.add_param("c_prime", c);
    rep.add_param("d_cutoff", static_cast<double>(fam.d_cutoff));
    rep.add_param("family_size", 2.0 * static_cast<double>(fam_ptr->size()));
    rep.add_param("t_max", line.t_max);
    rep.add_param("t_step", line.t_step);
    rep.add_param("t_exact", line.t_exact);
    rep.add_param("prime_cutoff", std::exp(0.5 * phi.sigma() * fam.L));
    if (line.t_exact < line.t_max) {
        std::ostringstream msg;
        msg << "d-average exact for t < " << line.t_exact << "; Mellin main term of the d-average beyond";
        rep.diagnostics.push_back(msg.str());
    }
    if (is_fejer(phi)) rep.diagnostics.push_back("fejer: tail estimated by taper-length comparison");
    if (opt.tol > 0.0 && rep.error_budget > opt.tol)
        throw AccuracyError("prediction error budget exceeds tolerance", rep.error_budget);
    return rep;
}
}  // namespace

Estimate digamma_integral(const testfn::TestFunction& phi, const FamilyParams& fam) {
    const double L = fam.L;
    const bool fejer = is_fejer(phi);
    const double x_end = fejer ? 400.0 : phi.decay_radius();
    const double T = 2.0 * kPi * x_end / L;
    const std::size_t panels = static_cast<std::size_t>(std::ceil(T / 0.5));
    const auto& gl = quad::gauss_legendre20();
    const double body = gl.integrate<double>(
        [&](double t) { return digamma_average(t) * phi.phi(t * L / (2.0 * kPi)); }, 0.0, T, panels) / kPi;
    double tail = 0.0, err = 1e-14;
    if (fejer) {
        // phi = A (1 - cos(wt)) K / t^2 beyond T, with K = 2/(sigma L^2), w = sigma L,
        // and the digamma average = log(t/2) + O(t^-2).
        const double A = phi.amplitude(), s = phi.sigma(), K = 2.0 * A / (s * L * L), om = s * L;
        const double g = std::log(T / 2.0) / (T * T);
        const double gp = (1.0 - 2.0 * std::log(T / 2.0)) / (T * T * T);
        const double flat = (std::log(T / 2.0) + 1.0) / T;
        const double osc = -g * std::sin(om * T) / om - gp * std::cos(om * T) / (om * om);
        tail = K * (flat - osc) / kPi;
        err += K / kPi * (std::abs(gp) / (om * om) + 2.0 / (3.0 * T * T * T));
    } else {
        err += (std::log(2.0 + T) + 1.0) * 2.0 / L * phi.envelope_tail(x_end);
    }
    return {body + tail, err};
}

DensityReport predict_density(const testfn::TestFunction& phi, const testfn::WeightFunction& w,
                              const FamilyParams& fam, const PredictOptions& opt) {
    return assemble("real-line", phi, w, fam, 0.0, opt);
}

DensityReport predict_density_contour(const testfn::TestFunction& phi, const testfn::WeightFunction& w,
                                      const FamilyParams& fam) {
    if (!phi.has_closed_form_extension()) throw UnsupportedError("contour form needs an entire phi (fejer)");
    return assemble("contour", phi, w, fam, fam.c_prime, PredictOptions{});
}

Estimate lemma41_line(const testfn::TestFunction& phi, const FamilyParams& fam, double c) {
    if (!phi.has_closed_form_extension()) throw UnsupportedError("contour form needs an entire phi (fejer)");
    const auto line = line_terms(phi, nullptr, fam, c, PredictOptions{});
    return {line.zeta + line.alpha, line.trunc_err};
}

Estimate dual_line(const testfn::TestFunction& phi, const testfn::WeightFunction& w,
                   const FamilyParams& fam, double c) {
    if (!phi.has_closed_form_extension()) throw UnsupportedError("contour form needs an entire phi (fejer)");
    if (!(c > 0.0)) throw DomainError("dual_line needs c > 0");
    const auto line = line_terms(phi, &w, fam, c, PredictOptions{});
    return {-line.dual, line.trunc_err};
}

}  // namespace qdl::ratios
