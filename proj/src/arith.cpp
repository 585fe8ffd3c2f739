#include "qdl/arith.hpp"

#include <cstdlib>
#include <string>
#include <utility>

#include "qdl/errors.hpp"

namespace qdl::arith {

namespace {

void check_limit(std::uint64_t limit) {
    if (limit > kMaxSieveLimit) {
        throw ResourceError("sieve limit " + std::to_string(limit) +
                            " exceeds memory bound " + std::to_string(kMaxSieveLimit));
    }
}

// Jacobi symbol (a/n), n odd and positive, a already reduced into [0, n).
int jacobi_reduced(std::uint64_t a, std::uint64_t n) {
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const auto r = n & 7;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

}  // namespace

std::vector<std::uint32_t> primes_upto(std::uint64_t limit) {
    check_limit(limit);
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    // odd-only bitset: index i represents 2i+1
    std::vector<bool> composite(limit / 2 + 1, false);
    primes.push_back(2);
    for (std::uint64_t i = 1; 2 * i + 1 <= limit; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        primes.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t q = p * p; q <= limit; q += 2 * p) composite[q / 2] = true;
    }
    return primes;
}

std::vector<std::int8_t> mobius_table(std::uint64_t limit) {
    check_limit(limit);
    std::vector<std::int8_t> mu(limit + 1, 0);
    if (limit == 0) return mu;
    mu[1] = 1;
    std::vector<std::uint32_t> primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::uint32_t>(i));
            mu[i] = -1;
        }
        for (const auto p : primes) {
            const std::uint64_t m = i * p;
            if (m > limit) break;
            composite[m] = true;
            if (i % p == 0) {
                mu[m] = 0;
                break;
            }
            mu[m] = static_cast<std::int8_t>(-mu[i]);
        }
    }
    return mu;
}

int mobius(std::uint64_t n) {
    if (n == 0) throw DomainError("mobius: n must be >= 1");
    int result = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        result = -result;
    }
    if (n > 1) result = -result;
    return result;
}

int kronecker(std::int64_t m, std::uint64_t n) {
    if (n == 0) return (m == 1 || m == -1) ? 1 : 0;
    int sign = 1;
    while ((n & 1) == 0) {
        if ((m & 1) == 0) return 0;
        n >>= 1;
        const auto r = static_cast<std::uint64_t>(m) & 7;
        if (r == 3 || r == 5) sign = -sign;
    }
    if (n == 1) return sign;
    auto a = static_cast<std::int64_t>(m % static_cast<std::int64_t>(n));
    if (a < 0) a += static_cast<std::int64_t>(n);
    return sign * jacobi_reduced(static_cast<std::uint64_t>(a), n);
}

std::vector<std::uint64_t> odd_squarefree_upto(std::uint64_t limit) {
    check_limit(limit);
    std::vector<std::uint64_t> out;
    if (limit == 0) return out;
    std::vector<bool> hit(limit / 2 + 1, false);  // index i -> 2i+1
    for (std::uint64_t p = 3; p * p <= limit; p += 2) {
        if (hit[p / 2]) continue;  // multiples of p^2 already marked
        const std::uint64_t sq = p * p;
        // odd multiples of p^2
        for (std::uint64_t q = sq; q <= limit; q += 2 * sq) hit[q / 2] = true;
    }
    out.reserve(limit / 3 + 1);
    for (std::uint64_t i = 0; 2 * i + 1 <= limit; ++i) {
        if (!hit[i]) out.push_back(2 * i + 1);
    }
    return out;
}

std::vector<std::int64_t> sieve_squarefree_odd(std::uint64_t limit) {
    const auto pos = odd_squarefree_upto(limit);
    std::vector<std::int64_t> out;
    out.reserve(2 * pos.size());
    for (const auto n : pos) {
        out.push_back(static_cast<std::int64_t>(n));
        out.push_back(-static_cast<std::int64_t>(n));
    }
    return out;
}

bool is_odd_squarefree(std::int64_t d) {
    if (d == 0 || (d & 1) == 0) return false;
    auto n = static_cast<std::uint64_t>(d < 0 ? -d : d);
    for (std::uint64_t p = 3; p * p <= n; p += 2) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return false;
    }
    return true;
}

QuadraticCharacter::QuadraticCharacter(std::int64_t d) : d_(d) {
    if (!is_odd_squarefree(d)) {
        throw DomainError("QuadraticCharacter: d = " + std::to_string(d) +
                          " is not odd and squarefree");
    }
    if (std::llabs(d) > (std::int64_t{1} << 59)) {
        throw DomainError("QuadraticCharacter: |d| too large");
    }
    conductor_ = 8 * static_cast<std::uint64_t>(std::llabs(d));
}

}  // namespace qdl::arith
