#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace qdl::quad {

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    std::size_t evals = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
inline double mag(const T& v) {
    return std::abs(v);
}

template <class T, class F>
Result<T> kronrod15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T resk = fc * kWgk[7];
    T resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        resk += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) resg += (f1 + f2) * kWg[j / 2];
    }
    Result<T> r;
    r.value = resk * h;
    r.error = mag(T((resk - resg) * h));
    r.evals = 15;
    return r;
}

template <class T, class F>
void adapt(F& f, double a, double b, double tol, int depth, Result<T>& acc,
           const Result<T>& here) {
    if (here.error <= tol || depth <= 0 || b - a < 1e-14 * (1.0 + std::abs(a))) {
        acc.value += here.value;
        acc.error += here.error;
        return;
    }
    const double m = 0.5 * (a + b);
    const auto left = kronrod15<T>(f, a, m);
    const auto right = kronrod15<T>(f, m, b);
    acc.evals += 30;
    adapt<T>(f, a, m, 0.5 * tol, depth - 1, acc, left);
    adapt<T>(f, m, b, 0.5 * tol, depth - 1, acc, right);
}

}  // namespace detail

// Adaptive 7/15-point Gauss-Kronrod on [a, b]; the absolute tolerance is halved on
// each bisection so the summed error estimate stays within abs_tol.
template <class T = double, class F>
Result<T> integrate(F&& f, double a, double b, double abs_tol, int max_depth = 40) {
    Result<T> acc;
    if (a == b) return acc;
    const auto first = detail::kronrod15<T>(f, a, b);
    acc.evals = first.evals;
    detail::adapt<T>(f, a, b, abs_tol, max_depth, acc, first);
    return acc;
}

// Splits [a, b] into chunks of length `chunk` (a half period of the dominant
// oscillation) and integrates each adaptively with a share of the budget.
template <class T = double, class F>
Result<T> integrate_chunked(F&& f, double a, double b, double chunk, double abs_tol,
                            int max_depth = 30) {
    Result<T> acc;
    if (b <= a) return acc;
    const auto n = static_cast<std::size_t>(std::ceil((b - a) / chunk));
    const double share = abs_tol / static_cast<double>(n == 0 ? 1 : n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = a + static_cast<double>(i) * chunk;
        const double hi = std::min(b, lo + chunk);
        const auto r = integrate<T>(f, lo, hi, share, max_depth);
        acc.value += r.value;
        acc.error += r.error;
        acc.evals += r.evals;
    }
    return acc;
}

// Fixed composite Gauss-Legendre rule; for smooth integrands where a known
// panel count resolves the integrand.
class GaussLegendre {
public:
    explicit GaussLegendre(int order = 20);

    template <class T = double, class F>
    T integrate(F&& f, double a, double b, int panels = 1) const {
        T sum{};
        const double w = (b - a) / panels;
        for (int k = 0; k < panels; ++k) {
            const double lo = a + k * w;
            const double c = lo + 0.5 * w;
            const double h = 0.5 * w;
            T part{};
            for (std::size_t i = 0; i < nodes_.size(); ++i) part += f(c + h * nodes_[i]) * weights_[i];
            sum += part * h;
        }
        return sum;
    }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

const GaussLegendre& gauss_legendre20();

}  // namespace qdl::quad
