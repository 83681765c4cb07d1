#pragma once

// Data-parallel map kernels.  Every kernel has a serial reference path and an
// OpenMP path selected by `Exec`; both write results by index and leave the
// reduction to the caller, so outputs never depend on scheduling.

#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <vector>

namespace optseq {

enum class Exec { serial, parallel };

template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  std::vector<R> out(n);
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(optseq_parallel_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

template <class F>
std::vector<double> tabulate(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  return parallel_map<double>(n, std::forward<F>(f), exec);
}

struct Extremum {
  double value;
  std::size_t index;
};

// First index wins ties.
inline Extremum arg_max(std::span<const double> v) {
  Extremum best{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > best.value) best = {v[i], i};
  return best;
}

inline Extremum arg_min(std::span<const double> v) {
  Extremum best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] < best.value) best = {v[i], i};
  return best;
}

}  // namespace optseq
