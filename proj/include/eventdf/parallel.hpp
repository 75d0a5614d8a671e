#ifndef EVENTDF_PARALLEL_HPP
#define EVENTDF_PARALLEL_HPP

#include <cstdlib>
#include <thread>
#include <vector>

namespace eventdf {

/// Default worker count: EVENTDF_JOBS env var, else hardware concurrency.
inline int default_jobs() {
  if (const char* env = std::getenv("EVENTDF_JOBS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, n). Work is assigned by index, results must be
/// written into per-index slots by the caller; output is identical for any
/// worker count.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  if (jobs <= 0) jobs = default_jobs();
  if (jobs == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace eventdf

#endif
