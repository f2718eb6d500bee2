#include "jsrlab/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace jsrlab {

int thread_count() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("JSRLAB_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0 && cap < n) n = cap;
    } catch (const std::exception&) {
      // Ignore a malformed value; the OpenMP default stays in effect.
    }
  }
  return n < 1 ? 1 : n;
}

}  // namespace jsrlab
