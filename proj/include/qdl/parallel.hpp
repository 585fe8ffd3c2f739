#pragma once
// Deterministic map-reduce: work is split into a fixed number of chunks that
// does not depend on the thread count, and chunk results are combined by a
// pairwise tree in chunk order. Same input -> same bits, any --threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qdl::par {

void set_threads(unsigned n);  // 0 = hardware concurrency
unsigned threads();

// Run body(i) for i in [0, n); each index exactly once, any order.
template <class Body>
void for_each_index(std::size_t n, Body&& body) {
    const unsigned nt = std::min<std::size_t>(threads(), n);
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

template <class T, class Combine>
T tree_reduce(std::vector<T> v, Combine&& combine) {
    if (v.empty()) return T{};
    for (std::size_t stride = 1; stride < v.size(); stride *= 2)
        for (std::size_t i = 0; i + stride < v.size(); i += 2 * stride)
            v[i] = combine(v[i], v[i + stride]);
    return v[0];
}

// Sum of f(k) for k in [0, n), chunked by `chunk`.
template <class T, class F>
T chunked_sum(std::size_t n, std::size_t chunk, F&& f) {
    const std::size_t nc = n == 0 ? 0 : (n + chunk - 1) / chunk;
    std::vector<T> part(nc, T{});
    for_each_index(nc, [&](std::size_t c) {
        T acc{};
        const std::size_t hi = std::min(n, (c + 1) * chunk);
        for (std::size_t k = c * chunk; k < hi; ++k) acc += f(k);
        part[c] = acc;
    });
    return tree_reduce(std::move(part), [](const T& a, const T& b) { return a + b; });
}

}  // namespace qdl::par
