#include "qdl/phasor.hpp"

#include <algorithm>
#include <cmath>

#include "qdl/parallel.hpp"

namespace qdl {

namespace {
constexpr std::size_t kBlock = 1024;
constexpr std::size_t kMaxChunks = 32;
}  // namespace

std::vector<std::complex<double>> phasor_grid(const std::vector<double>& freq,
                                              const std::vector<double>& amp, double t0,
                                              double dt, std::size_t count) {
    const std::size_t m = freq.size();
    std::vector<std::complex<double>> out(count);
    if (m == 0 || count == 0) return out;
    const std::size_t chunk = std::max(kPhasorChunk, (m + kMaxChunks - 1) / kMaxChunks);
    const std::size_t nc = (m + chunk - 1) / chunk;
    std::vector<std::vector<double>> parts(nc);
    par::for_each_index(nc, [&](std::size_t c) {
        const std::size_t lo = c * chunk, hi = std::min(m, lo + chunk);
        std::vector<double> acc(2 * count, 0.0);
        std::vector<double> sr(hi - lo), si(hi - lo);
        for (std::size_t j = lo; j < hi; ++j) {
            sr[j - lo] = std::cos(freq[j] * dt);
            si[j - lo] = -std::sin(freq[j] * dt);
        }
        for (std::size_t kb = 0; kb < count; kb += kBlock) {
            const std::size_t ke = std::min(count, kb + kBlock);
            const double tb = t0 + static_cast<double>(kb) * dt;
            double* a = acc.data() + 2 * kb;
            for (std::size_t j = lo; j < hi; ++j) {
                double zr = amp[j] * std::cos(freq[j] * tb), zi = -amp[j] * std::sin(freq[j] * tb);
                const double cr = sr[j - lo], ci = si[j - lo];
                for (std::size_t k = 0; k < ke - kb; ++k) {
                    a[2 * k] += zr;
                    a[2 * k + 1] += zi;
                    const double nr = zr * cr - zi * ci;
                    zi = zr * ci + zi * cr;
                    zr = nr;
                }
            }
        }
        parts[c] = std::move(acc);
    });
    auto total = par::tree_reduce(std::move(parts), [](std::vector<double> a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    });
    for (std::size_t k = 0; k < count; ++k) out[k] = {total[2 * k], total[2 * k + 1]};
    return out;
}

}  // namespace qdl
