#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

namespace jsrlab {

/// Execution policy of the enumeration kernels. Both paths produce
/// bit-identical results: work is split into ordered partitions and the
/// per-partition results are merged in partition order.
enum class Exec { Serial, Parallel };

/// Thread count for parallel kernels: omp_get_max_threads(), capped by the
/// JSRLAB_THREADS environment variable when it holds a positive integer.
int thread_count();

/// Runs body(k) for k in [0, parts). Exceptions thrown by any partition are
/// rethrown on the caller's thread (the one from the lowest partition wins).
template <class Body>
void for_each_partition(std::size_t parts, Exec exec, Body&& body) {
  if (exec == Exec::Serial || parts < 2) {
    for (std::size_t k = 0; k < parts; ++k) body(k);
    return;
  }
  std::vector<std::exception_ptr> errors(parts);
  const auto n = static_cast<long long>(parts);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
  for (long long k = 0; k < n; ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace jsrlab
