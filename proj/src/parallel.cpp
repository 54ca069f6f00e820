#include "hicon/parallel.hpp"

namespace hicon::par {

namespace {
Mode g_mode = Mode::OpenMP;
int g_threads = 0; // 0 = runtime default
} // namespace

Mode mode() { return g_mode; }

void set_mode(Mode m) { g_mode = m; }

int thread_count() {
#ifdef _OPENMP
    if (g_mode == Mode::OpenMP) return g_threads > 0 ? g_threads : omp_get_max_threads();
#endif
    return 1;
}

void set_thread_count(int n) {
    g_threads = n;
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#endif
    if (n == 1) g_mode = Mode::Serial;
}

} // namespace hicon::par
