#include "lltk/threads.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lltk {

namespace {
int default_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}
int initial_default = default_threads();
}  // namespace

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n > 0 ? n : initial_default);
#else
    (void)n;
#endif
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int configure_threads_from_env(int fallback) {
    int n = fallback;
    if (const char* env = std::getenv("LLTK_THREADS")) {
        try {
            n = std::stoi(env);
        } catch (...) {
            n = fallback;
        }
    }
    set_threads(n);
    return n;
}

}  // namespace lltk
