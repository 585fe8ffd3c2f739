#include "qdl/parallel.hpp"

namespace qdl::par {
namespace {
std::atomic<unsigned> g_threads{1};
}

void set_threads(unsigned n) {
    if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
    g_threads.store(n);
}

unsigned threads() { return g_threads.load(); }

}  // namespace qdl::par
