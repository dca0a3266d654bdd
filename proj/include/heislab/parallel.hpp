#ifndef HEISLAB_PARALLEL_HPP
#define HEISLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace heislab {

namespace detail {
inline std::atomic<int>& thread_cap_storage() {
  static std::atomic<int> cap = [] {
    if (const char* env = std::getenv("HEISLAB_THREADS")) {
      const int v = std::atoi(env);
      if (v > 0) return v;
    }
    return 1;
  }();
  return cap;
}
}  // namespace detail

/// Worker-thread cap used by every parallel loop in the library.
/// Defaults to $HEISLAB_THREADS, else 1.
inline int thread_cap() { return detail::thread_cap_storage().load(); }
inline void set_thread_cap(int threads) { detail::thread_cap_storage().store(std::max(1, threads)); }

/// Splits [0, count) into fixed-size chunks, evaluates `chunk_fn(begin, end)`
/// for each chunk (possibly concurrently) and returns the per-chunk results in
/// chunk order. Chunking does not depend on the thread count, so an in-order
/// reduction of the result is bitwise reproducible.
template <class T, class ChunkFn>
std::vector<T> map_chunks(std::size_t count, std::size_t chunk, ChunkFn&& chunk_fn) {
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<T> out(chunks);
  const int workers = static_cast<int>(std::min<std::size_t>(thread_cap(), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) out[c] = chunk_fn(c * chunk, std::min(count, (c + 1) * chunk));
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        out[c] = chunk_fn(c * chunk, std::min(count, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

/// Deterministic parallel sum of `term(i)` over [0, count).
template <class Term>
double chunked_sum(std::size_t count, Term&& term, std::size_t chunk = 64) {
  auto partial = map_chunks<double>(count, chunk, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += term(i);
    return s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace heislab

#endif  // HEISLAB_PARALLEL_HPP
