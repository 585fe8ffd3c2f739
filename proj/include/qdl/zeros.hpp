#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qdl/arith.hpp"

namespace qdl::zeros {

using cplx = std::complex<double>;

inline constexpr double kDefaultTmax = 60.0;
inline constexpr std::int64_t kDefaultDmax = 10000;
inline constexpr int kEvaluatorVersion = 1;

// L(s, chi_{8d}) from the Mellin integral of the theta series along a rotated ray:
//   (q/pi)^{a/2} Lambda(s) = delta^{2w} int_0^inf e^{wv} theta(delta^2 e^v) dv
//                          + delta^{-2w'} int_0^inf e^{w'v} theta(delta^-2 e^v) dv,
// w = (s+a)/2, w' = (1-s+a)/2, theta(x) = sum chi(n) n^a exp(-pi n^2 x / q).
// theta is sampled once at Gauss-Legendre nodes in v; each evaluation is then a
// weighted sum over the nodes. The rotation delta^2 = e^{i(pi/2 - eps)} trades the
// e^{-pi t/4} cancellation for a loss of e^{eps t/2}.
struct EvalOptions {
    double t_max = kDefaultTmax;
    double rotation = 0.0;   // eps; 0 picks clamp(8/t_max, 0.15, 0.6)
    double cutoff = 46.0;    // theta terms with real exponent past this are dropped
    std::int64_t d_max = kDefaultDmax;
};

class LEvaluator {
public:
    LEvaluator(const arith::QuadraticCharacter& chi, const EvalOptions& opt);
    LEvaluator(const arith::QuadraticCharacter& chi, double t_max = kDefaultTmax)
        : LEvaluator(chi, EvalOptions{t_max}) {}

    const arith::QuadraticCharacter& character() const { return chi_; }
    double t_max() const { return t_max_; }
    double rotation() const { return eps_; }
    std::size_t nodes() const { return v_.size(); }

    cplx L(cplx s) const;               // any s with |Im s| <= t_max
    double Z(double t) const;           // Hardy Z, real; |t| <= t_max
    double Z_error(double t) const;     // rounding bound for Z(t)
    double theta(double t) const;       // Im log Gamma((1/2+a+it)/2) + (t/2) log(q/pi)

private:
    cplx mellin_sum(cplx w, bool conj_theta) const;

    arith::QuadraticCharacter chi_;
    double t_max_;
    double eps_;
    double q_;
    int a_;
    double panel_h_ = 0.0;
    std::vector<double> v_, wt_;
    std::vector<cplx> th_;          // theta(delta^2 e^{v_j}) * wt_j
    std::vector<cplx> line_;        // th_ * e^{(1/2+a)/2 * v_j}, for the critical line
    std::vector<double> line_mass_; // |line_| prefix for error bounds
    std::vector<double> offs_;      // node offsets from panel centres
    std::size_t per_panel_ = 0;
};

// One-shot helpers; AccuracyError when the rounding bound exceeds 1e-10.
cplx eval_L(const arith::QuadraticCharacter& chi, double t);
cplx eval_L_at(const arith::QuadraticCharacter& chi, cplx s);
double hardy_Z(const arith::QuadraticCharacter& chi, double t);

struct ZeroSet {
    std::int64_t d = 0;
    double height = 0.0;
    std::vector<double> ordinates;  // ascending, in (0, T]
    double count_estimate = 0.0;    // theta(T)/pi, expected number of ordinates
    bool complete = false;
};

// Zeros with |gamma| <= T counted with both signs: (T/pi) log(8|d| T / (2 pi e)).
double zero_count_estimate(const arith::QuadraticCharacter& chi, double T);

struct ScanOptions {
    double step_factor = 1.0;  // multiplies the default scan step
    double tol = 1e-10;        // bracket width at which refinement stops
};
ZeroSet find_zeros(const arith::QuadraticCharacter& chi, double T, const ScanOptions& opt = {});

// zeros_<d>.csv: header d,T,gamma; one ordinate per row, 12 significant digits.
class ZeroCache {
public:
    explicit ZeroCache(std::filesystem::path dir);
    static std::filesystem::path default_dir();  // $QDL_CACHE_DIR or ./qdl_cache

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path file_for(std::int64_t d) const;
    // Cached set truncated to T, if the file covers height >= T.
    std::optional<ZeroSet> load(std::int64_t d, double T) const;
    void store(const ZeroSet& z) const;  // complete sets only; atomic replace

private:
    std::filesystem::path dir_;
};

// Cached or freshly computed zero sets for many d, scanned in parallel.
std::vector<ZeroSet> zeros_for(const std::vector<std::int64_t>& ds, double T, const ZeroCache* cache);

}  // namespace qdl::zeros
