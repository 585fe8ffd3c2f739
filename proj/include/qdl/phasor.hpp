#pragma once
// Sums of the form S(t) = sum_m a_m exp(-i f_m t) on a uniform t grid, by
// phasor recurrence in short blocks (re-anchored with sincos per block).

#include <complex>
#include <cstddef>
#include <vector>

namespace qdl {

inline constexpr std::size_t kPhasorChunk = 8192;

// S(t0 + k dt) for k < count. Deterministic for any thread count.
std::vector<std::complex<double>> phasor_grid(const std::vector<double>& freq,
                                              const std::vector<double>& amp, double t0,
                                              double dt, std::size_t count);

}  // namespace qdl
