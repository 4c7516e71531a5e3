#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sphk {

// Failure of an iterative numerical procedure (quadrature refinement ladder,
// eigen iteration, factorization after jitter escalation). Distinct from
// std::domain_error so callers can map it to a dedicated exit code.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dot products of unit vectors drift past +-1 by a few ulps; values within
// this slack are clamped, anything farther out is a caller bug.
inline constexpr double kUnitSlack = 1e-12;

inline double clip_unit(double x, const char* what = "x") {
  if (x >= -1.0 && x <= 1.0) return x;
  if (x > 1.0 && x - 1.0 <= kUnitSlack) return 1.0;
  if (x < -1.0 && -1.0 - x <= kUnitSlack) return -1.0;
  throw std::domain_error(std::string(what) + " outside [-1,1]: " +
                          std::to_string(x));
}

// Shortest float-exact decimal form (17 significant digits), C locale.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Worker budget for data-parallel loops: SPHERE_KERNELS_THREADS caps the
// hardware count; unset or invalid falls back to std::thread.
std::size_t thread_budget();

namespace detail {

template <typename F>
void parallel_for_impl(std::size_t n, F&& body, std::size_t n_threads) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_lock;
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> hold(error_lock);
        if (!first_error) first_error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads - 1);
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

// Runs body(0..n-1); iterations must write disjoint state so the result is
// independent of scheduling. Exceptions from workers are rethrown (first one).
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  std::size_t n_threads = std::min(thread_budget(), n > 0 ? n : std::size_t{1});
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  detail::parallel_for_impl(n, body, n_threads);
}

}  // namespace sphk
