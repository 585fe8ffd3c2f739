#pragma once

#include <complex>
#include <memory>
#include <string>

#include "qdl/special.hpp"

namespace qdl::testfn {

using cplx = std::complex<double>;

enum class WeightKind { gaussian };

// Averaging weight w (even, nonnegative, Schwartz) with its transforms and the
// derived kernel g(y) = w-hat(4 pi e y^2).
class WeightFunction {
public:
    WeightFunction(WeightKind kind, double amplitude = 1.0);

    WeightKind kind() const { return kind_; }
    std::string name() const;
    double amplitude() const { return amplitude_; }

    double w(double x) const;
    double w_hat(double xi) const;
    cplx mellin(cplx s) const;
    // Mw'(1)/Mw(1), equal to (2/w-hat(0)) * int_0^inf w(x) log x dx.
    double mellin_logderiv_at_one() const;
    // Support radius beyond which w(x) < 1e-16 * w(0).
    double cutoff() const;

    double g(double y) const;
    double g_hat(double xi) const;           // grid-backed
    cplx mellin_g(cplx s) const;             // analytic continuation to all s off poles
    cplx mellin_g_hat(cplx s, double abs_tol = 1e-12) const;  // numeric, Re s > 0
    const special::TransformGrid& g_hat_grid() const { return *g_hat_grid_; }

private:
    WeightKind kind_;
    double amplitude_;
    double g_scale_;  // g(y) = amplitude * exp(-g_scale * y^4)
    std::shared_ptr<const special::TransformGrid> g_hat_grid_;
};

WeightFunction make_weight(const std::string& spec);

enum class TestKind { fejer, bump2 };

// Even test function phi whose Fourier transform is supported in [-sigma, sigma].
class TestFunction {
public:
    TestFunction(TestKind kind, double sigma, double amplitude = 1.0);

    TestKind kind() const { return kind_; }
    std::string name() const;  // "fejer:1.5"
    double sigma() const { return sigma_; }
    double amplitude() const { return amplitude_; }
    bool has_closed_form_extension() const { return kind_ == TestKind::fejer; }

    double phi(double x) const;
    double phi_hat(double u) const;
    // phi(z) = int phi-hat(u) e^{2 pi i u z} du; |Im z| limited to strip_half_width.
    cplx phi_complex(cplx z) const;
    double phi0() const { return phi(0.0); }
    double phi_hat_integral_above(double a) const;  // int_a^inf phi-hat, a >= 0

    // |phi(x)| <= envelope(x) for x >= 0, and the integral of the envelope over [x, inf).
    double envelope(double x) const;
    double envelope_tail(double x) const;
    // Beyond this abscissa phi is below 1e-18 * phi(0) (bump2) or only the envelope applies.
    double decay_radius() const { return decay_radius_; }

    TestFunction scaled(double factor) const;

    static constexpr double strip_half_width = 5.0;

private:
    double beta(double u) const;
    double beta_hat(double x) const;  // direct quadrature
    cplx beta_hat_complex(cplx z) const;

    TestKind kind_;
    double sigma_;
    double amplitude_;
    double norm_ = 1.0;  // bump2: 1 / int beta^2
    double decay_radius_ = 0.0;
    std::shared_ptr<const special::TransformGrid> beta_hat_grid_;
};

TestFunction make_testfn(const std::string& spec);
TestFunction make_testfn(TestKind kind, double sigma);

}  // namespace qdl::testfn
