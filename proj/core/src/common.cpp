#include "ruelle/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>

namespace ruelle {

std::size_t thread_budget() {
  if (const char* env = std::getenv("RUELLE_KIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for_blocks(std::size_t total, std::size_t block_size,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  block_size = std::max<std::size_t>(1, block_size);
  const std::size_t n_blocks = (total + block_size - 1) / block_size;
  const std::size_t n_threads = std::min(thread_budget(), n_blocks);

  if (n_threads <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const std::size_t lo = b * block_size;
      fn(lo, std::min(lo + block_size, total));
    }
    return;
  }

  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  std::mutex err_mutex;
  std::exception_ptr first_error;
  for (std::size_t t = 0; t < n_threads; ++t) {
    workers.emplace_back([=, &fn, &err_mutex, &first_error] {
      try {
        // strided block assignment; block contents are thread-independent
        for (std::size_t b = t; b < n_blocks; b += n_threads) {
          const std::size_t lo = b * block_size;
          fn(lo, std::min(lo + block_size, total));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ruelle
