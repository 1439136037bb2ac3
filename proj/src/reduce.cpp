#include "wildlab/reduce.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace wildlab::par {

namespace {
int g_threads = 1;
// Fixed chunk count, independent of the worker count.
constexpr std::size_t kChunks = 64;
}  // namespace

void set_threads(int n) {
    if (n < 1) throw std::invalid_argument("worker count must be >= 1");
    g_threads = n;
}

int threads() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (g_threads == 1 || n < 4 * kChunks) {
        fn(0, n);
        return;
    }
    const std::size_t chunk = (n + kChunks - 1) / kChunks;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                const std::size_t c = next.fetch_add(1);
                if (c >= kChunks) return;
                const std::size_t lo = c * chunk;
                const std::size_t hi = std::min(n, lo + chunk);
                if (lo < hi) fn(lo, hi);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    };
    const int nw = std::min<int>(g_threads, static_cast<int>(kChunks));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw) - 1);
    for (int i = 1; i < nw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace wildlab::par

namespace wildlab::det {

namespace {
constexpr std::size_t kLeaf = 32;

double sum_range(const double* x, std::size_t n) {
    if (n <= kLeaf) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return sum_range(x, half) + sum_range(x + half, n - half);
}
}  // namespace

double pairwise_sum(std::span<const double> x) { return sum_range(x.data(), x.size()); }

double min(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("min of empty range");
    double m = x[0];
    for (double v : x) m = std::min(m, v);
    return m;
}

double max(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("max of empty range");
    double m = x[0];
    for (double v : x) m = std::max(m, v);
    return m;
}

}  // namespace wildlab::det
