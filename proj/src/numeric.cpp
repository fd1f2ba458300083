#include "wrslab/numeric.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace wrs {

double zeta(double s) {
  if (!(s > 1.0)) throw std::domain_error("zeta: requires s > 1");
  // Direct sum to K, Euler-Maclaurin correction for the tail. With K = 64
  // the first dropped term is O(s^5 K^{-s-5}) < 1e-12 for s in (1, 4].
  constexpr int K = 64;
  NeumaierSum head;
  for (int k = 1; k < K; ++k) head.add(std::pow(static_cast<double>(k), -s));
  const double Kd = static_cast<double>(K);
  double tail = std::pow(Kd, 1.0 - s) / (s - 1.0);
  tail += 0.5 * std::pow(Kd, -s);
  tail += s / 12.0 * std::pow(Kd, -s - 1.0);
  tail -= s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(Kd, -s - 3.0);
  return head.value() + tail;
}

namespace {
std::atomic<unsigned> g_default_threads{0};
}

void set_default_threads(unsigned n) { g_default_threads.store(n); }

unsigned default_threads() {
  unsigned n = g_default_threads.load();
  if (n == 0) n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : n;
}

void parallel_for(Index count, const std::function<void(Index)>& fn,
                  unsigned max_threads) {
  if (count <= 0) return;
  unsigned threads = max_threads == 0 ? default_threads() : max_threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  if (threads <= 1) {
    for (Index i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const Index i = next.fetch_add(1);
        if (i >= count || failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace wrs
