#include "swrl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>

namespace swrl {
namespace {

std::atomic<int> g_override{0};

int env_workers() {
  const char* raw = std::getenv("SWRL_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    return std::max(0, std::stoi(raw));
  } catch (const std::exception&) {
    return 0;
  }
}

}  // namespace

int worker_count() {
  if (int w = g_override.load(); w > 0) return w;
  if (int w = env_workers(); w > 0) return w;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_count(int workers) { g_override.store(workers > 0 ? workers : 0); }

namespace detail {

void run_blocks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& block) {
  if (count == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    block(0, count);
    return;
  }

  // Small blocks handed out dynamically balance uneven trial costs; the
  // assignment of indices to workers does not affect any per-index result.
  const std::size_t grain = std::max<std::size_t>(1, count / (workers * 8));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(grain);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + grain);
      try {
        block(begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& th : threads) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail
}  // namespace swrl
