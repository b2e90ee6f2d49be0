#include "ecavdg/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ecavdg {

int thread_count() {
  if (const char* env = std::getenv("ECAVDG_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
    }
  }
#ifdef ECAVDG_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace ecavdg
