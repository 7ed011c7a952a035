#include "grushin/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace grushin {

namespace {
// Set on pool threads so nested calls run inline instead of spawning more.
thread_local bool t_in_pool = false;
}  // namespace

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GC_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // Unparsable values are ignored.
    }
  }
  return n;
}

void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body) {
  if (end <= begin) return;
  const std::size_t count = end - begin;
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), count);
  if (workers <= 1 || t_in_pool) {
    for (std::size_t i = begin; i < end; ++i) body(i);
    return;
  }
  // Dynamic block scheduling: kernel rows have very uneven cost.
  const std::size_t block = std::max<std::size_t>(1, count / (workers * 8));
  std::atomic<std::size_t> next{begin};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      t_in_pool = true;
      try {
        for (;;) {
          const std::size_t lo = next.fetch_add(block);
          if (lo >= end) break;
          const std::size_t hi = std::min(end, lo + block);
          for (std::size_t i = lo; i < hi; ++i) body(i);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace grushin
