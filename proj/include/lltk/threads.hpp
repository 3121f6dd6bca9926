#pragma once

namespace lltk {

// Sets the OpenMP thread count for all parallel kernels. n = 0 restores the
// runtime default. Every kernel writes per-iteration results to disjoint
// slots, so results are bitwise identical for any thread count.
void set_threads(int n);

int thread_count();

// Applies the LLTK_THREADS environment variable if set, otherwise `fallback`
// (0 = runtime default). Returns the value applied.
int configure_threads_from_env(int fallback);

}  // namespace lltk
