#include "qdl/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "qdl/errors.hpp"
#include "qdl/quadrature.hpp"

namespace qdl::special {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxEmTerms = 40;

// B_{2k}/(2k)! for k = 1..kMaxEmTerms, from zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!).
const std::array<double, kMaxEmTerms + 1>& bernoulli_over_factorial() {
    static const auto table = [] {
        std::array<double, kMaxEmTerms + 1> c{};
        for (int k = 1; k <= kMaxEmTerms; ++k) {
            double z2k;
            if (k == 1) {
                z2k = kPi * kPi / 6.0;
            } else if (k == 2) {
                z2k = std::pow(kPi, 4) / 90.0;
            } else {
                z2k = 0.0;
                for (int n = 200; n >= 1; --n) z2k += std::pow(static_cast<double>(n), -2.0 * k);
            }
            const double sign = (k % 2 == 1) ? 1.0 : -1.0;
            c[k] = sign * 2.0 * z2k / std::pow(2.0 * kPi, 2.0 * k);
        }
        return c;
    }();
    return table;
}

int em_cutoff(cplx s) {
    return std::max(30, static_cast<int>(std::ceil(std::abs(s) / 3.0)) + 10);
}

// Euler-Maclaurin for zeta(s) and, optionally, zeta'(s).
void zeta_em(cplx s, cplx* value, cplx* deriv) {
    if (s == cplx(1.0, 0.0)) {
        throw PoleError("zeta: pole at s = 1", 1.0, euler_gamma());
    }
    const int n_cut = em_cutoff(s);
    const auto& c = bernoulli_over_factorial();
    cplx sum = 0.0;
    cplx dsum = 0.0;
    for (int n = n_cut - 1; n >= 1; --n) {
        const double ln = std::log(static_cast<double>(n));
        const cplx term = std::exp(-s * ln);
        sum += term;
        dsum -= ln * term;
    }
    const double big_n = n_cut;
    const double log_n = std::log(big_n);
    const cplx n_pow = std::exp(-s * log_n);  // N^{-s}
    const cplx sm1 = s - 1.0;
    sum += big_n * n_pow / sm1 + 0.5 * n_pow;
    dsum += -log_n * big_n * n_pow / sm1 - big_n * n_pow / (sm1 * sm1) - 0.5 * log_n * n_pow;

    // rising factorial (s)_{2k-1} and its derivative, accumulated factor by factor
    cplx poch = s;
    cplx dpoch = 1.0;
    cplx n_pow_k = n_pow / big_n;  // N^{-s-1}
    double prev = HUGE_VAL;
    for (int k = 1; k <= kMaxEmTerms; ++k) {
        const cplx term = c[k] * poch * n_pow_k;
        const cplx dterm = c[k] * n_pow_k * (dpoch - log_n * poch);
        const double mag = std::abs(term) + std::abs(dterm);
        if (mag > prev) break;  // asymptotic series started to diverge
        sum += term;
        dsum += dterm;
        if (mag < 1e-18 * (std::abs(sum) + std::abs(dsum))) break;
        prev = mag;
        for (int j = 2 * k - 1; j <= 2 * k; ++j) {
            dpoch = dpoch * (s + static_cast<double>(j)) + poch;
            poch *= s + static_cast<double>(j);
        }
        n_pow_k /= big_n * big_n;
    }
    if (value) *value = sum;
    if (deriv) *deriv = dsum;
}

bool is_nonpositive_integer(cplx z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

cplx lgamma_stirling(cplx z) {
    // z with Re(z) >= 15
    static constexpr std::array<double, 10> b = {
        1.0 / 12.0,          -1.0 / 360.0,       1.0 / 1260.0,        -1.0 / 1680.0,
        1.0 / 1188.0,        -691.0 / 360360.0,  1.0 / 156.0,         -3617.0 / 122400.0,
        43867.0 / 244188.0,  -174611.0 / 125400.0};
    const cplx inv = 1.0 / z;
    const cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx p = inv;
    for (const double coeff : b) {
        series += coeff * p;
        p *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
}

// log sin(pi z) without overflow for large |Im z| (any branch)
cplx log_sin_pi(cplx z) {
    const cplx i(0.0, 1.0);
    if (z.imag() > 20.0) return -i * kPi * z + std::log(std::exp(2.0 * i * kPi * z) - 1.0) - std::log(2.0 * i);
    if (z.imag() < -20.0) return i * kPi * z + std::log(1.0 - std::exp(-2.0 * i * kPi * z)) - std::log(2.0 * i);
    return std::log(std::sin(kPi * z));
}

}  // namespace

cplx zeta(cplx s) {
    cplx v;
    zeta_em(s, &v, nullptr);
    return v;
}

cplx zeta_deriv(cplx s) {
    cplx d;
    zeta_em(s, nullptr, &d);
    return d;
}

cplx zeta_logderiv(cplx s) {
    cplx v;
    cplx d;
    zeta_em(s, &v, &d);
    return d / v;
}

std::pair<cplx, cplx> zeta_with_deriv(cplx s) {
    cplx v, d;
    zeta_em(s, &v, &d);
    return {v, d};
}

cplx lgamma(cplx z) {
    if (is_nonpositive_integer(z)) throw DomainError("lgamma: pole at nonpositive integer");
    if (z.real() < -5.0) {
        // reflection; branch is not continuous here, only exp() of it is used
        return std::log(kPi) - log_sin_pi(z) - lgamma(1.0 - z);
    }
    cplx shift = 0.0;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return lgamma_stirling(z) - shift;
}

cplx digamma(cplx z) {
    if (is_nonpositive_integer(z)) throw DomainError("digamma: pole at nonpositive integer");
    if (z.real() < 0.5) {
        return digamma(1.0 - z) - kPi / std::tan(kPi * z);
    }
    cplx shift = 0.0;
    while (z.real() < 15.0) {
        shift += 1.0 / z;
        z += 1.0;
    }
    static constexpr std::array<double, 9> b2k_over_2k = {
        1.0 / 12.0,        -1.0 / 120.0,     1.0 / 252.0,       -1.0 / 240.0,    1.0 / 132.0,
        -691.0 / 32760.0,  1.0 / 12.0,       -3617.0 / 8160.0,  43867.0 / 14364.0};
    const cplx inv2 = 1.0 / (z * z);
    cplx p = inv2;
    cplx series = 0.0;
    for (const double coeff : b2k_over_2k) {
        series += coeff * p;
        p *= inv2;
    }
    return std::log(z) - 0.5 / z - series - shift;
}

GammaRatio gamma_ratio(cplx a, cplx b) {
    const bool pole_a = is_nonpositive_integer(a);
    const bool pole_b = is_nonpositive_integer(b);
    if (pole_b && !pole_a) return {0.0, false};
    if (pole_a && !pole_b) return {cplx(HUGE_VAL, 0.0), true};
    if (pole_a && pole_b) {
        // limit Gamma(-m + e)/Gamma(-n + e) = (-1)^{m-n} n!/m!
        const int m = static_cast<int>(-a.real());
        const int n = static_cast<int>(-b.real());
        const double sign = ((m - n) % 2 == 0) ? 1.0 : -1.0;
        return {sign * std::exp(std::lgamma(n + 1.0) - std::lgamma(m + 1.0)), false};
    }
    if (a == b) return {1.0, false};
    return {std::exp(lgamma(a) - lgamma(b)), false};
}

double euler_gamma() {
    static const double value = -digamma(cplx(1.0, 0.0)).real();
    return value;
}

double zeta2_logderiv() {
    static const double value = zeta_logderiv(cplx(2.0, 0.0)).real();
    return value;
}

double fourier_at(const EvenFunction& fn, double xi, double abs_tol) {
    if (2.0 * fn.tail_mass > abs_tol) {
        throw AccuracyError("fourier_at: envelope tail exceeds tolerance", 2.0 * fn.tail_mass);
    }
    const double freq = std::abs(xi) + fn.bandwidth;
    const double chunk = freq > 0.0 ? std::min(fn.x_max, 0.5 / freq) : fn.x_max;
    auto integrand = [&](double x) { return fn.f(x) * std::cos(2.0 * kPi * x * xi); };
    const auto r = quad::integrate_chunked<double>(integrand, 0.0, fn.x_max, chunk,
                                                   0.25 * (abs_tol - 2.0 * fn.tail_mass));
    return 2.0 * r.value;
}

cplx mellin_at(const MellinFunction& fn, cplx s, double abs_tol) {
    const double sr = s.real();
    if (!(sr > fn.strip_lo && sr < fn.strip_hi)) {
        throw DomainError("mellin_at: Re(s) outside the strip of convergence");
    }
    const double u_hi = std::log(fn.x_hi);
    double x_lo = fn.x_lo;
    // shrink x_lo until the small-x contribution bound small_bound * x_lo^sr / sr fits
    while (fn.small_bound * std::pow(x_lo, sr) / sr > 0.25 * abs_tol && x_lo > 1e-300) {
        x_lo *= 1e-2;
    }
    const double u_lo = std::log(x_lo);
    auto integrand = [&](double u) {
        const double x = std::exp(u);
        return fn.f(x) * std::exp(s * u);
    };
    const double freq = std::abs(s.imag()) / (2.0 * kPi);
    const double chunk = freq > 0.0 ? std::max(0.5 / freq, 1e-3) : 1.0;
    const auto r = quad::integrate_chunked<cplx>(integrand, u_lo, u_hi, chunk, 0.5 * abs_tol);
    return r.value;
}

TransformGrid::TransformGrid(const std::function<double(double)>& f, double x_max,
                             double panel_width, int degree, double envelope_beyond)
    : x_max_(x_max), width_(panel_width), degree_(degree), envelope_(envelope_beyond) {
    const int panels = static_cast<int>(std::ceil(x_max / panel_width));
    x_max_ = panels * panel_width;
    nodes_.reserve(static_cast<std::size_t>(panels) * (degree + 1));
    for (int p = 0; p < panels; ++p) {
        const double lo = p * panel_width;
        for (int j = degree; j >= 0; --j) {
            // Chebyshev points of the second kind, ascending within the panel
            const double t = std::cos(kPi * j / degree);
            const double x = lo + 0.5 * panel_width * (t + 1.0);
            nodes_.push_back(x);
            values_.push_back(f(x));
        }
    }
}

double TransformGrid::operator()(double x) const {
    x = std::abs(x);
    if (x >= x_max_) return 0.0;
    const auto p = static_cast<std::size_t>(x / width_);
    const std::size_t base = p * static_cast<std::size_t>(degree_ + 1);
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= degree_; ++j) {
        const double xj = nodes_[base + j];
        const double diff = x - xj;
        if (diff == 0.0) return values_[base + j];
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == degree_) w *= 0.5;
        w /= diff;
        num += w * values_[base + j];
        den += w;
    }
    return num / den;
}

}  // namespace qdl::special
