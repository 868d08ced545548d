#include "vexlp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <thread>

namespace vexlp {

std::size_t worker_count() {
  if (const char* env = std::getenv("VEX_THREADS")) {
    std::size_t n = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, n);
    if (ec == std::errc() && ptr == end && n > 0) return n;
    return 1;
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace {
// Set on pool threads: nested parallel_for calls run inline instead of
// spawning workers^2 threads.
thread_local bool inside_pool = false;
}  // namespace

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = inside_pool ? 1 : std::min(worker_count(), n);
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        inside_pool = true;
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace vexlp
