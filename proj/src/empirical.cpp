#include "qdl/empirical.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qdl/errors.hpp"
#include "qdl/parallel.hpp"

namespace qdl::empirical {

namespace {

constexpr std::size_t kChunk = 2048;

std::vector<std::int64_t> family_ds(const FamilyParams& fam) {
    if (fam.d_cutoff == 0) throw ConfigError("family has no d cutoff");
    return arith::sieve_squarefree_odd(fam.d_cutoff);
}

// Tail of the zero sum above x0 = T L / 2pi, split as log(q) * s0 + s1 so the
// per-character bound is closed form. Pieces come from envelope_tail on doubling
// intervals [x_k, x_{k+1}] with the density log(q x / L) / L taken at x_{k+1}.
struct TailModel {
    double s0 = 0.0, s1 = 0.0, edge = 0.0, L = 1.0;

    TailModel(const TestFunction& phi, const FamilyParams& fam, double T) : L(fam.L) {
        if (!(T > 0.0)) throw DomainError("zero tail needs T > 0");
        const double x0 = T * fam.L / (2.0 * std::numbers::pi);
        edge = phi.envelope(x0);
        double x = x0, tail = phi.envelope_tail(x);
        for (int k = 0; k < 200 && tail > 0.0; ++k) {
            const double x1 = 2.0 * x;
            const double next = phi.envelope_tail(x1);
            const double piece = tail - next;
            s0 += piece;
            s1 += piece * std::log(x1 / L);
            x = x1;
            tail = next;
            const bool floor_only = phi.kind() == testfn::TestKind::bump2 && x >= phi.decay_radius();
            if (floor_only || tail < 1e-20 * phi.phi0()) break;
        }
        // remainder past the last interval, density taken at 2x
        s0 += tail;
        s1 += tail * std::log(2.0 * x / L);
    }

    // both signs; the 2 * edge term covers the +-2 counting slack
    double bound(std::int64_t d) const {
        const double q = 8.0 * std::abs(double(d));
        return 2.0 * (std::max(0.0, std::log(q) * s0 + s1) / L + 2.0 * edge);
    }
};

}  // namespace

double char_average(std::uint64_t n, const WeightFunction& w, const FamilyParams& fam) {
    if (n == 0) throw DomainError("char_average needs n >= 1");
    const auto ds = family_ds(fam);
    struct Acc {
        double num = 0.0, den = 0.0;
        Acc& operator+=(const Acc& o) {
            num += o.num;
            den += o.den;
            return *this;
        }
        Acc operator+(const Acc& o) const { return Acc(*this) += o; }
    };
    const Acc s = par::chunked_sum<Acc>(ds.size(), kChunk, [&](std::size_t k) {
        const double wt = w.w(double(ds[k]) / fam.X);
        return Acc{wt * arith::QuadraticCharacter(ds[k])(n), wt};
    });
    return s.num / s.den;
}

double zero_tail_bound(const TestFunction& phi, const FamilyParams& fam, std::int64_t d, double T) {
    return TailModel(phi, fam, T).bound(d);
}

std::vector<CharacterTerm> character_terms(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam,
                                           const EmpiricalOptions& opt) {
    const auto ds = family_ds(fam);
    const auto sets = zeros::zeros_for(ds, opt.T, opt.cache);
    const TailModel tail(phi, fam, opt.T);
    const double scale = fam.L / (2.0 * std::numbers::pi);
    std::vector<CharacterTerm> out(ds.size());
    par::for_each_index(ds.size(), [&](std::size_t i) {
        auto& c = out[i];
        c.d = ds[i];
        c.weight = w.w(double(ds[i]) / fam.X);
        c.complete = sets[i].complete;
        c.zeros = sets[i].ordinates.size();
        double s = 0.0;
        for (double g : sets[i].ordinates) s += phi.phi(g * scale);
        c.zero_sum = 2.0 * s;  // -gamma contributes the same
        c.tail = tail.bound(ds[i]);
    });
    return out;
}

double weighted_mean(const std::vector<CharacterTerm>& terms) {
    double num = 0.0, den = 0.0;
    for (const auto& c : terms)
        if (c.complete) {
            num += c.weight * c.zero_sum;
            den += c.weight;
        }
    if (!(den > 0.0)) throw DataQualityError("no complete characters with positive weight");
    return num / den;
}

double bootstrap_se(const std::vector<CharacterTerm>& terms, int resamples, std::uint64_t seed) {
    if (resamples < 2) throw ConfigError("bootstrap needs at least 2 resamples");
    std::vector<const CharacterTerm*> pool;
    for (const auto& c : terms)
        if (c.complete) pool.push_back(&c);
    if (pool.size() < 2) throw DataQualityError("too few characters to bootstrap");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::vector<double> means;
    for (int r = 0; r < resamples; ++r) {
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < pool.size(); ++k) {
            const auto* c = pool[pick(rng)];
            num += c->weight * c->zero_sum;
            den += c->weight;
        }
        means.push_back(num / den);
    }
    double m = 0.0;
    for (double x : means) m += x;
    m /= means.size();
    double v = 0.0;
    for (double x : means) v += (x - m) * (x - m);
    return std::sqrt(v / (means.size() - 1));
}

DensityReport empirical_density(const TestFunction& phi, const WeightFunction& w, const FamilyParams& fam,
                                const EmpiricalOptions& opt) {
    const auto terms = character_terms(phi, w, fam, opt);
    std::size_t incomplete = 0;
    double wall = 0.0, wkept = 0.0, tail = 0.0, zeros_used = 0.0;
    for (const auto& c : terms) {
        wall += c.weight;
        if (!c.complete) {
            ++incomplete;
            continue;
        }
        wkept += c.weight;
        tail += c.weight * c.tail;
        zeros_used += c.zeros;
    }
    const double frac = terms.empty() ? 1.0 : double(incomplete) / terms.size();
    if (frac > opt.max_incomplete)
        throw DataQualityError(std::to_string(incomplete) + " of " + std::to_string(terms.size()) +
                               " zero sets incomplete");

    DensityReport r;
    r.method = "empirical";
    r.add_term("zero_sum", weighted_mean(terms));
    r.finalize();
    r.error_budget = tail / wkept;
    r.add_error("zero_sum(tail above T)", r.error_budget);
    const double se = opt.bootstrap >= 2 ? bootstrap_se(terms, opt.bootstrap, opt.seed) : 0.0;

    r.add_param("X", fam.X);
    r.add_param("L", fam.L);
    r.add_param("T", opt.T);
    r.add_param("phi", phi.name());
    r.add_param("w", w.name());
    r.add_param("d_cutoff", double(fam.d_cutoff));
    r.add_param("characters", double(terms.size()));
    r.add_param("incomplete", double(incomplete));
    r.add_param("zeros", zeros_used);
    r.add_param("W_star", wall);
    r.add_param("bootstrap_se", se);
    r.add_param("bootstrap_resamples", double(opt.bootstrap));
    r.add_param("seed", double(opt.seed));
    r.diagnostics.push_back("error_budget is the zero tail above T; sampling error is bootstrap_se "
                            "(characters resampled with replacement)");
    if (incomplete)
        r.diagnostics.push_back(std::to_string(incomplete) + " incomplete zero sets excluded (" +
                                std::to_string(100.0 * (1.0 - wkept / wall)) + "% of W*)");
    return r;
}

}  // namespace qdl::empirical
