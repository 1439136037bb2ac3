#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wildlab::par {

// Worker count for pointwise kernels. Reductions never race: values are
// written elementwise into a buffer over a fixed partition and combined by
// a fixed tree, so results are bit-stable regardless of the worker count.
void set_threads(int n);
int threads();

// Runs fn(begin, end) over a fixed partition of [0, n). The partition does
// not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace wildlab::par

namespace wildlab::det {

// Pairwise summation over a fixed tree.
double pairwise_sum(std::span<const double> x);

double min(std::span<const double> x);
double max(std::span<const double> x);

template <class F>
double sum_map(std::size_t n, F&& f) {
    std::vector<double> buf(n);
    par::parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) buf[i] = f(i);
    });
    return pairwise_sum(buf);
}

template <class F>
double max_map(std::size_t n, F&& f) {
    std::vector<double> buf(n);
    par::parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) buf[i] = f(i);
    });
    return max(buf);
}

template <class F>
double min_map(std::size_t n, F&& f) {
    std::vector<double> buf(n);
    par::parallel_for(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) buf[i] = f(i);
    });
    return min(buf);
}

}  // namespace wildlab::det
