#ifndef HICON_PARALLEL_HPP
#define HICON_PARALLEL_HPP

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// OpenMP-backed loop kernels with a serial reference path. The parallel and
// serial paths share the same blocked summation tree, so reductions are
// bitwise identical regardless of mode or thread count.
namespace hicon::par {

enum class Mode { Serial, OpenMP };

Mode mode();
void set_mode(Mode m);
int thread_count();
void set_thread_count(int n);

inline constexpr std::size_t kReduceBlock = 1024;

// f(i) for i in [0, n); each index owns its writes.
template <class F>
void for_each(std::size_t n, F&& f) {
#ifdef _OPENMP
    if (mode() == Mode::OpenMP) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            f(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) f(i);
}

// Sum of term(i) over [0, n) with a fixed block partition: block partials are
// accumulated sequentially, then combined in index order.
template <class F>
double reduce_sum(std::size_t n, F&& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
    for_each(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kReduceBlock;
        const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace hicon::par

#endif
