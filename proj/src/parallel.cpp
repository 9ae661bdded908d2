#include "platoonlab/parallel.hpp"

#include <algorithm>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace platoonlab {

int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("PLATOONLAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<long>(n, cap);
  }
  return std::max(n, 1);
}

}  // namespace platoonlab
