#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace vexlp {

/// Worker cap from VEX_THREADS (positive integer); defaults to the hardware
/// concurrency. Malformed values fall back to 1.
std::size_t worker_count();

/// Runs task(0..n-1) on up to worker_count() threads. Each task must be
/// independent; results are written by index so output order never depends
/// on scheduling. The first exception by index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace vexlp
