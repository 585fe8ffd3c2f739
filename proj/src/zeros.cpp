#include "qdl/zeros.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "qdl/errors.hpp"
#include "qdl/parallel.hpp"
#include "qdl/quadrature.hpp"
#include "qdl/special.hpp"

namespace qdl::zeros {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kBudget = 1e-10;
}  // namespace

LEvaluator::LEvaluator(const arith::QuadraticCharacter& chi, const EvalOptions& opt)
    : chi_(chi), t_max_(opt.t_max), q_(static_cast<double>(chi.conductor())), a_(chi.parity()) {
    const double t_max = opt.t_max, kXcut = opt.cutoff;
    if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (!(kXcut >= 20.0)) throw ConfigError("theta cutoff below 20");
    if (std::abs(chi.d()) > opt.d_max) throw DomainError("|d| above d_max = " + std::to_string(opt.d_max));
    eps_ = opt.rotation > 0.0 ? opt.rotation : std::clamp(8.0 / t_max, 0.15, 0.6);
    if (eps_ >= 0.5 * kPi) throw ConfigError("rotation must be below pi/2");
    const double se = std::sin(eps_), ce = std::cos(eps_);
    const double V = std::log(kXcut * q_ / (kPi * se));
    const double band = kXcut * ce / se + 0.5 * t_max + 4.0;
    const auto panels = static_cast<std::size_t>(std::ceil(V * band / 12.0));
    panel_h_ = V / panels;

    const auto& gl = quad::gauss_legendre20();
    per_panel_ = gl.nodes().size();
    for (std::size_t i = 0; i < per_panel_; ++i) offs_.push_back(0.5 * panel_h_ * gl.nodes()[i]);
    for (std::size_t k = 0; k < panels; ++k)
        for (std::size_t i = 0; i < per_panel_; ++i) {
            v_.push_back((k + 0.5) * panel_h_ + offs_[i]);
            wt_.push_back(0.5 * panel_h_ * gl.weights()[i]);
        }

    // chi(n) n^a on odd n up to the v = 0 cutoff
    const auto nmax = static_cast<std::size_t>(std::sqrt(kXcut * q_ / (kPi * se))) + 2;
    std::vector<double> coef;
    for (std::size_t n = 1; n <= nmax; n += 2) coef.push_back(chi(n) * (a_ ? double(n) : 1.0));

    const cplx delta2 = std::polar(1.0, 0.5 * kPi - eps_);
    const double w0 = 0.5 * (0.5 + a_);
    th_.resize(v_.size());
    line_.resize(v_.size());
    line_mass_.resize(v_.size());
    par::for_each_index(v_.size(), [&](std::size_t j) {
        const cplx A = kPi * std::exp(v_[j]) * delta2 / q_;
        // exp(-A n^2) over odd n by two-term recurrence
        const cplx step = std::exp(-8.0 * A);
        cplx E = std::exp(-A), R = step;
        cplx sum = 0.0;
        double mass = 0.0;
        const double cut = kXcut / A.real();
        for (std::size_t m = 0; m < coef.size(); ++m) {
            const double n = 2.0 * m + 1.0;
            if (n * n > cut) break;
            sum += coef[m] * E;
            mass += std::abs(coef[m]) * std::abs(E);
            // (n+2)^2 - n^2 = 4n + 4; the ratio itself advances by e^{-8A}
            E *= R;
            R *= step;
        }
        th_[j] = wt_[j] * sum;
        const double g = std::exp(w0 * v_[j]);
        line_[j] = th_[j] * g;
        line_mass_[j] = wt_[j] * mass * g;
    });
}

cplx LEvaluator::mellin_sum(cplx w, bool conj_theta) const {
    cplx s = 0.0;
    for (std::size_t j = 0; j < v_.size(); ++j) s += (conj_theta ? std::conj(th_[j]) : th_[j]) * std::exp(w * v_[j]);
    return s;
}

cplx LEvaluator::L(cplx s) const {
    if (std::abs(s.imag()) > t_max_ * (1.0 + 1e-12)) throw DomainError("|Im s| beyond the evaluator's t_max");
    const double phi = 0.5 * kPi - eps_, lq = std::log(q_ / kPi);
    const cplx w = 0.5 * (s + double(a_)), w2 = 0.5 * (1.0 - s + double(a_));
    const cplx lf = -0.5 * a_ * lq - 0.5 * s * lq - special::lgamma(w);
    const cplx I(0.0, 1.0);
    return std::exp(I * phi * w + lf) * mellin_sum(w, false) + std::exp(-I * phi * w2 + lf) * mellin_sum(w2, true);
}

double LEvaluator::theta(double t) const {
    return special::lgamma(cplx(0.5 * (0.5 + a_), 0.5 * t)).imag() + 0.5 * t * std::log(q_ / kPi);
}

double LEvaluator::Z(double t) const {
    t = std::abs(t);
    if (t > t_max_ * (1.0 + 1e-12)) throw DomainError("t beyond the evaluator's t_max");
    const double tau = 0.5 * t;
    // e^{i tau v} = e^{i tau c_k} e^{i tau off_i}: one rotation per panel
    std::vector<cplx> off(per_panel_);
    for (std::size_t i = 0; i < per_panel_; ++i) off[i] = std::polar(1.0, tau * offs_[i]);
    const cplx rot = std::polar(1.0, tau * panel_h_);
    cplx c = std::polar(1.0, 0.5 * tau * panel_h_), S = 0.0;
    const std::size_t panels = v_.size() / per_panel_;
    for (std::size_t k = 0; k < panels; ++k) {
        cplx part = 0.0;
        const cplx* l = &line_[k * per_panel_];
        for (std::size_t i = 0; i < per_panel_; ++i) part += l[i] * off[i];
        S += part * c;
        if ((k & 63) == 63) c = std::polar(1.0, tau * (k + 1.5) * panel_h_);  // re-anchor
        else c *= rot;
    }
    const double phi = 0.5 * kPi - eps_, w0 = 0.5 * (0.5 + a_);
    const cplx w(w0, tau);
    const double mag = std::exp(-phi * tau - special::lgamma(w).real() - (0.5 * a_ + 0.25) * std::log(q_ / kPi));
    return 2.0 * mag * (std::polar(1.0, phi * w0) * S).real();
}

double LEvaluator::Z_error(double t) const {
    const double tau = 0.5 * std::abs(t), phi = 0.5 * kPi - eps_, w0 = 0.5 * (0.5 + a_);
    const double mag = std::exp(-phi * tau - special::lgamma(cplx(w0, tau)).real() -
                                (0.5 * a_ + 0.25) * std::log(q_ / kPi));
    double m = 0.0;
    for (double x : line_mass_) m += x;
    return 2.0 * mag * m * 1e-14;
}

cplx eval_L(const arith::QuadraticCharacter& chi, double t) {
    const LEvaluator ev(chi, std::max(1.0, std::abs(t)));
    if (const double e = ev.Z_error(t); e > kBudget) throw AccuracyError("L(1/2+it) rounding bound over budget", e);
    return ev.L(cplx(0.5, t));
}

cplx eval_L_at(const arith::QuadraticCharacter& chi, cplx s) {
    return LEvaluator(chi, std::max(1.0, std::abs(s.imag()))).L(s);
}

double hardy_Z(const arith::QuadraticCharacter& chi, double t) {
    const LEvaluator ev(chi, std::max(1.0, std::abs(t)));
    if (const double e = ev.Z_error(t); e > kBudget) throw AccuracyError("Z(t) rounding bound over budget", e);
    return ev.Z(t);
}

double zero_count_estimate(const arith::QuadraticCharacter& chi, double T) {
    if (!(T > 0.0)) throw DomainError("zero_count_estimate needs T > 0");
    return T / kPi * std::log(8.0 * std::abs(double(chi.d())) * T / (2.0 * kPi * std::numbers::e));
}

namespace {
std::vector<double> scan(const LEvaluator& ev, double T, double step, double tol) {
    std::vector<double> out;
    const double t0 = 1e-6;
    const auto n = static_cast<std::size_t>(std::ceil((T - t0) / step));
    double ta = t0, za = ev.Z(ta);
    for (std::size_t k = 1; k <= n; ++k) {
        const double tb = k == n ? T : t0 + k * step;
        const double zb = ev.Z(tb);
        if (zb == 0.0) {
            out.push_back(tb);
        } else if (za != 0.0 && (za < 0.0) != (zb < 0.0)) {
            std::uintmax_t iters = 100;
            auto f = [&](double t) { return ev.Z(t); };
            auto stop = [tol](double lo, double hi) { return hi - lo <= tol; };
            const auto r = boost::math::tools::toms748_solve(f, ta, tb, za, zb, stop, iters);
            out.push_back(0.5 * (r.first + r.second));
        }
        ta = tb;
        za = zb;
    }
    return out;
}
}  // namespace

ZeroSet find_zeros(const arith::QuadraticCharacter& chi, double T, const ScanOptions& opt) {
    if (!(T > 0.0)) throw DomainError("find_zeros needs T > 0");
    const LEvaluator ev(chi, T);
    ZeroSet z;
    z.d = chi.d();
    z.height = T;
    z.count_estimate = ev.theta(T) / kPi;
    const double step = opt.step_factor * kPi / (2.0 * std::log(8.0 * std::abs(double(chi.d())) * (T + 3.0)));
    z.ordinates = scan(ev, T, step, opt.tol);
    if (std::abs(z.ordinates.size() - z.count_estimate) > 2.0) z.ordinates = scan(ev, T, 0.5 * step, opt.tol);
    z.complete = std::abs(z.ordinates.size() - z.count_estimate) <= 2.0;
    return z;
}

// ------------------------------------------------------------------ cache

ZeroCache::ZeroCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path ZeroCache::default_dir() {
    if (const char* env = std::getenv("QDL_CACHE_DIR"); env && *env) return env;
    return std::filesystem::current_path() / "qdl_cache";
}

std::filesystem::path ZeroCache::file_for(std::int64_t d) const {
    return dir_ / ("zeros_" + std::to_string(d) + ".csv");
}

std::optional<ZeroSet> ZeroCache::load(std::int64_t d, double T) const {
    std::ifstream in(file_for(d));
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line != "d,T,gamma") return std::nullopt;
    ZeroSet z;
    z.d = d;
    double height = -1.0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c)) return std::nullopt;
        if (std::stoll(a) != d) return std::nullopt;
        height = std::stod(b);
        const double g = std::stod(c);
        if (g <= T) z.ordinates.push_back(g);
    }
    if (height < T) return std::nullopt;
    const arith::QuadraticCharacter chi(d);
    z.height = T;
    z.count_estimate = LEvaluator(chi, T).theta(T) / kPi;
    z.complete = std::abs(z.ordinates.size() - z.count_estimate) <= 2.0;
    return z;
}

void ZeroCache::store(const ZeroSet& z) const {
    if (!z.complete || z.ordinates.empty()) return;
    std::filesystem::create_directories(dir_);
    std::ostringstream tmpname;
    tmpname << ".zeros_" << z.d << "." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << ".tmp";
    const auto tmp = dir_ / tmpname.str();
    {
        std::ofstream out(tmp);
        if (!out) throw ResourceError("cannot write zero cache in " + dir_.string());
        out << "d,T,gamma\n" << std::setprecision(12);
        for (double g : z.ordinates) out << z.d << ',' << z.height << ',' << g << '\n';
        if (!out) throw ResourceError("zero cache write failed");
    }
    std::filesystem::rename(tmp, file_for(z.d));
}

std::vector<ZeroSet> zeros_for(const std::vector<std::int64_t>& ds, double T, const ZeroCache* cache) {
    std::vector<ZeroSet> out(ds.size());
    par::for_each_index(ds.size(), [&](std::size_t i) {
        if (cache)
            if (auto z = cache->load(ds[i], T)) {
                out[i] = std::move(*z);
                return;
            }
        out[i] = find_zeros(arith::QuadraticCharacter(ds[i]), T);
        if (cache) cache->store(out[i]);
    });
    return out;
}

}  // namespace qdl::zeros
