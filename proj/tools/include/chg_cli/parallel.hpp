#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace chg::cli {

// Evaluates fn(i) for i in [0, count) on up to `jobs` threads. Results are
// stored by index; the exception of the lowest failing index is rethrown.
template <class Fn>
auto parallel_map(int count, int jobs, Fn fn) -> std::vector<std::invoke_result_t<Fn, int>> {
  using R = std::invoke_result_t<Fn, int>;
  std::vector<R> results(static_cast<std::size_t>(std::max(count, 0)));
  std::vector<std::exception_ptr> errors(results.size());
  const int workers = std::clamp(jobs, 1, std::max(count, 1));

  auto run = [&](int worker) {
    for (int i = worker; i < count; i += workers) {
      try {
        results[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace chg::cli
