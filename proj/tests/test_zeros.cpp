#include <algorithm>
#include <cmath>
#include <numbers>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "qdl/errors.hpp"
#include "qdl/zeros.hpp"

using namespace qdl;
using namespace qdl::zeros;
using arith::QuadraticCharacter;

namespace {

// Hurwitz zeta by Euler-Maclaurin: N direct terms, 8 Bernoulli corrections.
cplx hurwitz(cplx s, double a) {
    constexpr int N = 60;
    cplx sum = 0.0;
    for (int k = 0; k < N; ++k) sum += std::pow(k + a, -s);
    const double x = N + a;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    const double B[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
    cplx pr = s * std::pow(x, -s - 1.0);
    double fact = 2.0;
    for (int j = 0; j < 8; ++j) {
        sum += B[j] / fact * pr;
        pr *= (s + double(2 * j + 1)) * (s + double(2 * j + 2)) / (x * x);
        fact *= (2 * j + 3) * (2 * j + 4);
    }
    return sum;
}

cplx L_hurwitz(const QuadraticCharacter& chi, cplx s) {
    const double q = chi.conductor();
    cplx r = 0.0;
    for (std::uint64_t b = 1; b < chi.conductor(); ++b)
        if (int c = chi(b)) r += double(c) * hurwitz(s, b / q);
    return r * std::pow(q, -s);
}

std::size_t sign_changes(const LEvaluator& ev, double a, double b, double h) {
    std::size_t n = 0;
    double prev = ev.Z(a);
    for (double t = a + h; t <= b; t += h) {
        const double z = ev.Z(t);
        if ((z < 0.0) != (prev < 0.0)) ++n;
        prev = z;
    }
    return n;
}

}  // namespace

TEST_CASE("conjugate symmetry at d = 5, t = 3") {
    const QuadraticCharacter chi(5);
    const cplx a = eval_L(chi, 3.0), b = eval_L(chi, -3.0);
    CHECK(std::abs(a - std::conj(b)) < 1e-12);
}

TEST_CASE("s = 2 against the direct Dirichlet series, d = 3") {
    const QuadraticCharacter chi(3);
    double direct = 0.0;
    const std::uint64_t N = 2000000;
    for (std::uint64_t n = N; n >= 1; --n) direct += chi(n) / (double(n) * n);
    // partial character sums are bounded by q, so by summation by parts the tail is below 2q/N^2
    const double tail = 2.0 * 24.0 / (double(N) * N);
    const cplx v = eval_L_at(chi, 2.0);
    CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(std::abs(v.real() - direct) <= 1e-10 + tail);
}

TEST_CASE("d = 1 against Hurwitz-Euler-Maclaurin") {
    const QuadraticCharacter chi(1);
    for (double t : {1.0, 5.0, 10.0}) {
        CAPTURE(t);
        CHECK(std::abs(eval_L(chi, t) - L_hurwitz(chi, cplx(0.5, t))) < 1e-8);
    }
    // more characters and heights, off the line too; the reference loses digits as q grows
    for (std::int64_t d : {-1, 3, -7, 13, -1001}) {
        const LEvaluator ev(QuadraticCharacter(d), 40.0);
        for (cplx s : {cplx(0.5, 0.0), cplx(0.5, 23.5), cplx(0.5, 39.0), cplx(0.8, 12.0), cplx(1.5, -7.0)}) {
            CAPTURE(d);
            CAPTURE(s);
            CHECK(std::abs(ev.L(s) - L_hurwitz(QuadraticCharacter(d), s)) < 1e-10);
        }
    }
}

TEST_CASE("Z is real rotation of L, even, and bounded in error") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 60.0);
    for (std::int64_t d : {1, -3, 5, -11, 4997}) {
        const LEvaluator ev{QuadraticCharacter(d)};
        for (int i = 0; i < 10; ++i) {
            const double t = U(rng);
            CAPTURE(d);
            CAPTURE(t);
            CHECK(std::abs(std::abs(ev.Z(t)) - std::abs(ev.L(cplx(0.5, t)))) < 1e-10);
            CHECK(ev.Z(-t) == ev.Z(t));
            CHECK(ev.Z_error(t) < 1e-10);
        }
    }
}

TEST_CASE("evaluator stable under rotation and cutoff changes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.0, 60.0);
    std::uniform_int_distribution<int> D(-2000, 2000);
    int done = 0;
    while (done < 10) {
        const std::int64_t d = 2 * D(rng) + 1;
        if (!arith::is_odd_squarefree(d)) continue;
        const QuadraticCharacter chi(d);
        const double t = U(rng);
        const double base = LEvaluator(chi).Z(t);
        const double rotated = LEvaluator(chi, EvalOptions{.rotation = 0.3}).Z(t);
        const double longer = LEvaluator(chi, EvalOptions{.cutoff = 60.0}).Z(t);
        CAPTURE(d);
        CAPTURE(t);
        CHECK(std::abs(base - rotated) < 1e-9);
        CHECK(std::abs(base - longer) < 1e-9);
        ++done;
    }
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(LEvaluator(QuadraticCharacter(10001)), DomainError);
    CHECK_THROWS_AS(LEvaluator(QuadraticCharacter(3), 0.0), ConfigError);
    const LEvaluator ev(QuadraticCharacter(3), 20.0);
    CHECK_THROWS_AS(ev.Z(25.0), DomainError);
    CHECK_THROWS_AS(zero_count_estimate(QuadraticCharacter(3), 0.0), DomainError);
}

TEST_CASE("d = 1 zeros: fine scan, sign changes, nesting") {
    const QuadraticCharacter chi(1);
    const ZeroSet z30 = find_zeros(chi, 30.0);
    const LEvaluator ev(chi, 30.0);
    const double step = std::numbers::pi / (2.0 * std::log(8.0 * 33.0));
    CHECK(z30.ordinates.size() == sign_changes(ev, 1e-6, 30.0, step / 10.0));
    CHECK(z30.complete);
    CHECK(z30.ordinates.front() == doctest::Approx(4.899974).epsilon(1e-6));

    const ZeroSet z20 = find_zeros(chi, 20.0);
    REQUIRE(z20.ordinates.size() <= z30.ordinates.size());
    for (std::size_t i = 0; i < z20.ordinates.size(); ++i)
        CHECK(std::abs(z20.ordinates[i] - z30.ordinates[i]) < 1e-9);
    CHECK(z30.ordinates[z20.ordinates.size()] > 20.0);

    for (double g : z30.ordinates) CHECK(std::abs(ev.Z(g)) < 1e-6);
    CHECK(std::abs(zero_count_estimate(chi, 30.0) - 2.0 * z30.ordinates.size()) <= 2.0 * 2.0);
}

TEST_CASE("zero_count_estimate shape") {
    const QuadraticCharacter a(3), b(7);
    CHECK(zero_count_estimate(a, 30.0) < zero_count_estimate(a, 31.0));
    CHECK(zero_count_estimate(a, 30.0) < zero_count_estimate(b, 30.0));
    const double T = 1e4;
    CHECK(zero_count_estimate(QuadraticCharacter(-11), T) - zero_count_estimate(QuadraticCharacter(-5), T) ==
          doctest::Approx(T / std::numbers::pi * std::log(11.0 / 5.0)));
}

TEST_CASE("completeness and Z at ordinates for |d| <= 200, T = 40") {
    std::vector<std::int64_t> ds;
    for (std::int64_t d = -199; d <= 199; d += 2)
        if (arith::is_odd_squarefree(d)) ds.push_back(d);
    const auto sets = zeros_for(ds, 40.0, nullptr);
    std::size_t incomplete = 0;
    for (const auto& z : sets) {
        incomplete += !z.complete;
        CHECK(std::is_sorted(z.ordinates.begin(), z.ordinates.end()));
        CHECK(std::adjacent_find(z.ordinates.begin(), z.ordinates.end()) == z.ordinates.end());
        CHECK(z.ordinates.back() <= 40.0);
        const LEvaluator ev(QuadraticCharacter(z.d), 40.0);
        for (double g : z.ordinates) REQUIRE(std::abs(ev.Z(g)) < 1e-6);
    }
    MESSAGE(incomplete << " incomplete of " << sets.size());
    CHECK(incomplete < 0.01 * sets.size());
}

TEST_CASE("zero cache round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "qdl_test_cache";
    std::filesystem::remove_all(dir);
    const ZeroCache cache(dir);
    CHECK(!cache.load(-7, 30.0));

    const auto fresh = zeros_for({-7, 13}, 30.0, &cache);
    REQUIRE(std::filesystem::exists(cache.file_for(-7)));
    std::ifstream in(cache.file_for(-7));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "d,T,gamma");
    CHECK(row.rfind("-7,30,", 0) == 0);

    const auto again = cache.load(-7, 30.0);
    REQUIRE(again);
    REQUIRE(again->ordinates.size() == fresh[0].ordinates.size());
    for (std::size_t i = 0; i < again->ordinates.size(); ++i)
        CHECK(again->ordinates[i] == doctest::Approx(fresh[0].ordinates[i]).epsilon(1e-11));

    const auto lower = cache.load(-7, 20.0);
    REQUIRE(lower);
    CHECK(lower->ordinates.back() <= 20.0);
    CHECK(!cache.load(-7, 35.0));  // file only covers T = 30
    std::filesystem::remove_all(dir);
}
