#pragma once

#include <complex>
#include <utility>
#include <functional>
#include <vector>

namespace qdl::special {

using cplx = std::complex<double>;

// Riemann zeta by Euler-Maclaurin summation. Throws PoleError at s = 1.
cplx zeta(cplx s);
// zeta'(s), differentiating the Euler-Maclaurin terms.
cplx zeta_deriv(cplx s);
cplx zeta_logderiv(cplx s);
// zeta(s) and zeta'(s) from one summation
std::pair<cplx, cplx> zeta_with_deriv(cplx s);

// Principal log-gamma; continuous in the right half-plane.
cplx lgamma(cplx z);
cplx digamma(cplx z);

struct GammaRatio {
    cplx value;
    bool infinite = false;  // Gamma(a) has a pole and Gamma(b) does not
};
// Gamma(a)/Gamma(b) through the log-gamma difference.
GammaRatio gamma_ratio(cplx a, cplx b);

// Constants, evaluated once with the routines above.
double euler_gamma();
double zeta2_logderiv();  // zeta'(2)/zeta(2)

// An even, integrable function with the information needed to truncate
// transforms: |f(x)| is negligible beyond x_max, and tail_mass bounds
// the integral of |f| over [x_max, inf).
struct EvenFunction {
    std::function<double(double)> f;
    double x_max = 0.0;
    double tail_mass = 0.0;
    // Upper bound on the oscillation frequency of f itself (0 if not oscillatory).
    double bandwidth = 0.0;
};

// Fourier transform with the e^{-2 pi i x xi} convention.
double fourier_at(const EvenFunction& fn, double xi, double abs_tol = 1e-12);

// A function on (0, inf) whose Mellin transform converges for
// strip_lo < Re(s) < strip_hi. |f| <= small_bound on (0, x_lo] and f is
// negligible beyond x_hi.
struct MellinFunction {
    std::function<double(double)> f;
    double strip_lo = 0.0;
    double strip_hi = 0.0;
    double small_bound = 1.0;
    double x_lo = 1e-12;
    double x_hi = 0.0;
};

// int_0^inf f(x) x^{s-1} dx, substituting x = e^u.
cplx mellin_at(const MellinFunction& fn, cplx s, double abs_tol = 1e-12);

// Piecewise Chebyshev interpolant of a smooth function on [0, x_max];
// evaluates to 0 beyond x_max where the envelope bound applies.
class TransformGrid {
public:
    TransformGrid() = default;
    TransformGrid(const std::function<double(double)>& f, double x_max, double panel_width,
                  int degree, double envelope_beyond = 0.0);

    double operator()(double x) const;
    double x_max() const { return x_max_; }
    double envelope_beyond() const { return envelope_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }

private:
    double x_max_ = 0.0;
    double width_ = 1.0;
    int degree_ = 0;
    double envelope_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> values_;
};

}  // namespace qdl::special
