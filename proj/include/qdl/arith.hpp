#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace qdl::arith {

// Largest sieve bound accepted before a ResourceError is raised.
inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 33;

std::vector<std::uint32_t> primes_upto(std::uint64_t limit);

int mobius(std::uint64_t n);
// mu(0..limit) via a linear sieve; entry 0 is unused.
std::vector<std::int8_t> mobius_table(std::uint64_t limit);

// Kronecker symbol (m/n) for n >= 1, computed without factoring.
int kronecker(std::int64_t m, std::uint64_t n);

// Odd squarefree d with 1 <= |d| <= limit, ordered 1, -1, 3, -3, 5, -5, ...
std::vector<std::int64_t> sieve_squarefree_odd(std::uint64_t limit);
// Positive half of the above: odd squarefree n <= limit, ascending.
std::vector<std::uint64_t> odd_squarefree_upto(std::uint64_t limit);

bool is_odd_squarefree(std::int64_t d);

// The real primitive character chi_{8d} of conductor 8|d|.
class QuadraticCharacter {
public:
    explicit QuadraticCharacter(std::int64_t d);

    std::int64_t d() const noexcept { return d_; }
    // 0 for d > 0, 1 for d < 0.
    int parity() const noexcept { return d_ < 0 ? 1 : 0; }
    std::uint64_t conductor() const noexcept { return conductor_; }

    int operator()(std::uint64_t n) const { return kronecker(8 * d_, n); }

private:
    std::int64_t d_;
    std::uint64_t conductor_;
};

}  // namespace qdl::arith
