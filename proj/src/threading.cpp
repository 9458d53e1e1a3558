#include "gsig/threading.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace gsig {

namespace {
std::atomic<std::size_t> g_max_threads{0};

std::size_t hardware_threads() {
  std::size_t n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}
}  // namespace

void set_max_threads(std::size_t n) { g_max_threads.store(n); }

std::size_t max_threads() {
  std::size_t n = g_max_threads.load();
  return n == 0 ? hardware_threads() : n;
}

void parallel_chunks(std::size_t count, std::size_t chunk_size,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  if (chunk_size == 0) chunk_size = 1;
  // Chunk boundaries are a function of (count, chunk_size) alone; workers
  // pull whole chunks, so every output region is produced by exactly one
  // sequential pass regardless of the thread budget.
  std::size_t n_chunks = (count + chunk_size - 1) / chunk_size;
  std::size_t workers = std::min(max_threads(), n_chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c)
      fn(c * chunk_size, std::min((c + 1) * chunk_size, count));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      fn(c * chunk_size, std::min((c + 1) * chunk_size, count));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (auto& t : pool) t.join();
}

}  // namespace gsig
