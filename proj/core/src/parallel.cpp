#include "dpkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dpkit {
namespace {

int initial_threads() {
  if (const char* env = std::getenv("DPKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

std::atomic<int>& thread_setting() {
  static std::atomic<int> threads{initial_threads()};
  return threads;
}

}  // namespace

int max_threads() { return thread_setting().load(); }

void set_max_threads(int threads) { thread_setting().store(std::max(1, threads)); }

void for_each_chunk(std::size_t items,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t chunks = chunk_count(items);
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c, c * kChunkSize, std::min(items, (c + 1) * kChunkSize));
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c, c * kChunkSize, std::min(items, (c + 1) * kChunkSize));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace dpkit
