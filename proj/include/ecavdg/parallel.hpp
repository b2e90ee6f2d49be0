#pragma once

#include <exception>
#include <vector>

#ifdef ECAVDG_HAVE_OPENMP
#include <omp.h>
#endif

namespace ecavdg {

/// Worker count: ECAVDG_THREADS if set (>= 1), else the OpenMP default, else 1.
int thread_count();

inline int thread_index() {
#ifdef ECAVDG_HAVE_OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

/// Runs f(i) for i in [0, n). If any call throws, the exception of the lowest
/// index is rethrown after the loop, so failures are reported
/// deterministically regardless of the schedule.
template <class F>
void parallel_for(int n, F&& f) {
  std::vector<std::exception_ptr> errors;
#ifdef ECAVDG_HAVE_OPENMP
  const int nt = thread_count();
  if (nt > 1 && n > 1) {
    errors.resize(n);
#pragma omp parallel for schedule(static) num_threads(nt)
    for (int i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return;
  }
#endif
  for (int i = 0; i < n; ++i) f(i);
}

}  // namespace ecavdg
