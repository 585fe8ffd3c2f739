#include "qdl/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qdl/errors.hpp"
#include "qdl/quadrature.hpp"

namespace qdl::testfn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// Sampling step for the bump2 envelope tables.
constexpr double kEnvelopeStep = 0.05;

template <class T>
T sinc(T s) {
    if (std::abs(s) < 1e-4) {
        const T s2 = s * s;
        return T(1.0) - s2 / 6.0 + s2 * s2 / 120.0;
    }
    return std::sin(s) / s;
}

}  // namespace

// ---------------------------------------------------------------- WeightFunction

WeightFunction::WeightFunction(WeightKind kind, double amplitude)
    : kind_(kind), amplitude_(amplitude), g_scale_(16.0 * kPi * kPi * kPi * kE * kE) {
    if (!(amplitude > 0.0)) throw ConfigError("weight amplitude must be positive");
    // The grid is shared by all gaussian weights; built once for unit amplitude.
    static const auto grid = [c = g_scale_] {
        const double y_max = std::pow(42.0 / c, 0.25);
        special::EvenFunction g{[c](double y) { return std::exp(-c * y * y * y * y); }, y_max, 0.0,
                                0.0};
        return std::make_shared<const special::TransformGrid>(
            [g](double xi) { return special::fourier_at(g, xi, 1e-15); }, 64.0, 1.0, 24, 1e-16);
    }();
    g_hat_grid_ = grid;
}

std::string WeightFunction::name() const { return "gaussian"; }

double WeightFunction::w(double x) const { return amplitude_ * std::exp(-kPi * x * x); }

double WeightFunction::w_hat(double xi) const { return amplitude_ * std::exp(-kPi * xi * xi); }

cplx WeightFunction::mellin(cplx s) const {
    return amplitude_ * 0.5 * std::exp(-0.5 * s * std::log(kPi) + special::lgamma(0.5 * s));
}

double WeightFunction::mellin_logderiv_at_one() const {
    return 0.5 * (special::digamma(0.5).real() - std::log(kPi));
}

double WeightFunction::cutoff() const { return std::sqrt(16.0 * std::log(10.0) / kPi); }

double WeightFunction::g(double y) const {
    const double y2 = y * y;
    return amplitude_ * std::exp(-g_scale_ * y2 * y2);
}

double WeightFunction::g_hat(double xi) const { return amplitude_ * (*g_hat_grid_)(xi); }

cplx WeightFunction::mellin_g(cplx s) const {
    return amplitude_ * 0.25 * std::exp(-0.25 * s * std::log(g_scale_) + special::lgamma(0.25 * s));
}

cplx WeightFunction::mellin_g_hat(cplx s, double abs_tol) const {
    const auto grid = g_hat_grid_;
    special::MellinFunction fn{[grid](double x) { return (*grid)(x); }, 0.0, HUGE_VAL,
                               std::abs((*grid)(0.0)), 1e-6, grid->x_max()};
    return amplitude_ * special::mellin_at(fn, s, abs_tol / amplitude_);
}

WeightFunction make_weight(const std::string& spec) {
    if (spec == "gaussian") return WeightFunction(WeightKind::gaussian);
    throw ConfigError("unknown weight kind '" + spec + "'");
}

// ----------------------------------------------------------------- TestFunction

TestFunction::TestFunction(TestKind kind, double sigma, double amplitude)
    : kind_(kind), sigma_(sigma), amplitude_(amplitude) {
    if (!(sigma > 0.0)) throw ConfigError("test function support sigma must be positive");
    if (kind_ == TestKind::fejer) {
        decay_radius_ = HUGE_VAL;
        return;
    }
    const auto& gl = quad::gauss_legendre20();
    const double half = 0.5 * sigma_;
    norm_ = 1.0 / gl.integrate([&](double u) { return beta(u) * beta(u); }, -half, half, 40);

    // decay radius: first x beyond which phi stays below 1e-18 phi(0) over a window of 10/sigma
    const double phi0 = norm_ * std::pow(beta_hat(0.0), 2);
    const double window = 10.0 / sigma_;
    double radius = window;
    for (; radius < 4000.0 / sigma_; radius += window) {
        double peak = 0.0;
        for (int k = 0; k <= 200; ++k) {
            const double x = radius + window * k / 200.0;
            peak = std::max(peak, norm_ * std::pow(beta_hat(x), 2));
        }
        if (peak < 1e-18 * phi0) break;
    }
    decay_radius_ = radius;
    beta_hat_grid_ = std::make_shared<const special::TransformGrid>(
        [this](double x) { return beta_hat(x); }, radius, 0.5 / std::max(1.0, sigma_), 22, 0.0);
}

std::string TestFunction::name() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s:%g", kind_ == TestKind::fejer ? "fejer" : "bump2", sigma_);
    return buf;
}

double TestFunction::beta(double u) const {
    const double t = 2.0 * u / sigma_;
    const double q = 1.0 - t * t;
    if (q <= 0.0) return 0.0;
    return std::exp(-1.0 / q);
}

double TestFunction::beta_hat(double x) const {
    const int panels = 16 + static_cast<int>(std::ceil(2.0 * sigma_ * std::abs(x)));
    return 2.0 * quad::gauss_legendre20().integrate(
                     [&](double u) { return beta(u) * std::cos(2.0 * kPi * u * x); }, 0.0,
                     0.5 * sigma_, panels);
}

cplx TestFunction::beta_hat_complex(cplx z) const {
    const int panels = 16 + static_cast<int>(std::ceil(2.0 * sigma_ * std::abs(z)));
    return 2.0 * quad::gauss_legendre20().integrate<cplx>(
                     [&](double u) { return beta(u) * std::cos(2.0 * kPi * u * z); }, 0.0,
                     0.5 * sigma_, panels);
}

double TestFunction::phi(double x) const {
    x = std::abs(x);
    if (kind_ == TestKind::fejer) {
        const double s = sinc(kPi * sigma_ * x);
        return amplitude_ * sigma_ * s * s;
    }
    if (x >= decay_radius_) return 0.0;
    const double b = (*beta_hat_grid_)(x);
    return amplitude_ * norm_ * b * b;
}

double TestFunction::phi_hat(double u) const {
    u = std::abs(u);
    if (u >= sigma_) return 0.0;
    if (kind_ == TestKind::fejer) return amplitude_ * (1.0 - u / sigma_);
    const double half = 0.5 * sigma_;
    const double conv = quad::gauss_legendre20().integrate(
        [&](double v) { return beta(v) * beta(u - v); }, u - half, half, 16);
    return amplitude_ * norm_ * conv;
}

cplx TestFunction::phi_complex(cplx z) const {
    if (std::abs(z.imag()) > strip_half_width) {
        throw DomainError("phi_complex: |Im z| exceeds the configured strip");
    }
    if (kind_ == TestKind::fejer) {
        const cplx s = sinc(kPi * sigma_ * z);
        return amplitude_ * sigma_ * s * s;
    }
    const cplx b = beta_hat_complex(z);
    return amplitude_ * norm_ * b * b;
}

double TestFunction::phi_hat_integral_above(double a) const {
    a = std::max(0.0, a);
    if (a >= sigma_) return 0.0;
    if (kind_ == TestKind::fejer) return amplitude_ * (sigma_ - a) * (sigma_ - a) / (2.0 * sigma_);
    return quad::integrate<double>([&](double u) { return phi_hat(u); }, a, sigma_,
                                   1e-14 * amplitude_)
        .value;
}

double TestFunction::envelope(double x) const {
    x = std::abs(x);
    if (kind_ == TestKind::fejer) {
        if (x == 0.0) return amplitude_ * sigma_;
        return amplitude_ * std::min(sigma_, 1.0 / (sigma_ * kPi * kPi * x * x));
    }
    if (x >= decay_radius_) return 1e-18 * phi0();
    // sampled suffix maximum; the interpolant is band limited, so a fine sampling bounds it
    // up to a small relative slack
    double peak = 0.0;
    for (double y = x; y < decay_radius_; y += kEnvelopeStep) peak = std::max(peak, phi(y));
    return 1.05 * peak + 1e-18 * phi0();
}

double TestFunction::envelope_tail(double x) const {
    x = std::abs(x);
    if (kind_ == TestKind::fejer) {
        if (x <= 0.0) return HUGE_VAL;
        return amplitude_ / (sigma_ * kPi * kPi * x);
    }
    double mass = 0.0;
    for (double y = x; y < decay_radius_; y += kEnvelopeStep) mass += 1.05 * phi(y) * kEnvelopeStep;
    return mass + 1e-18 * phi0();
}

TestFunction TestFunction::scaled(double factor) const {
    TestFunction copy = *this;
    copy.amplitude_ *= factor;
    return copy;
}

TestFunction make_testfn(TestKind kind, double sigma) { return TestFunction(kind, sigma); }

TestFunction make_testfn(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ConfigError("test function spec must be kind:sigma");
    const std::string kind = spec.substr(0, colon);
    double sigma = 0.0;
    try {
        std::size_t used = 0;
        sigma = std::stod(spec.substr(colon + 1), &used);
        if (used != spec.size() - colon - 1) throw ConfigError("trailing characters in sigma");
    } catch (const std::logic_error&) {
        throw ConfigError("cannot parse sigma in '" + spec + "'");
    }
    if (kind == "fejer") return TestFunction(TestKind::fejer, sigma);
    if (kind == "bump2") return TestFunction(TestKind::bump2, sigma);
    throw ConfigError("unknown test function kind '" + kind + "'");
}

}  // namespace qdl::testfn
