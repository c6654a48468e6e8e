#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace heunbc {

// Execution policy for the data-parallel kernels.  Every kernel has a serial
// reference path; the parallel path must produce bit-identical results, which
// is achieved by filling per-index buffers in parallel and reducing serially.
enum class Exec { serial, par };

template <class F>
void for_each_index(std::size_t n, Exec ex, F&& f) {
  if (ex == Exec::par) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      f(static_cast<std::size_t>(i));
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) f(i);
}

inline int thread_count(Exec ex) {
#ifdef _OPENMP
  if (ex == Exec::par) return omp_get_max_threads();
#endif
  (void)ex;
  return 1;
}

}  // namespace heunbc
