#ifndef HGSIM_PARALLEL_HPP
#define HGSIM_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hgsim {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n). Each index must write only its own output
/// slots, which keeps results independent of the worker count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  threads = resolve_threads(threads);
  if (n == 0) return;
  if (threads <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), n));
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Neumaier compensated accumulator; used wherever reduction order is fixed
/// by contract (trajectory index, chunk index, time index).
struct Accumulator {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double value) {
    double t = sum + value;
    if (std::abs(sum) >= std::abs(value))
      compensation += (sum - t) + value;
    else
      compensation += (value - t) + sum;
    sum = t;
  }

  double total() const { return sum + compensation; }
};

}  // namespace hgsim

#endif
