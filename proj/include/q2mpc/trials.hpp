#pragma once

#include <cstdint>
#include <vector>

#include "q2mpc/rng.hpp"

namespace q2mpc {

// Worker count for trial batches: an explicit request wins, otherwise the
// Q2MPC_TRIAL_WORKERS environment variable, otherwise 1.
int trial_workers(int requested = 0);

// Runs fn(index, seed) for every index in [0, count) and collects the
// results in index order. Each slot's seed is derived from (master, index)
// alone, and slots are written independently, so the result vector does not
// depend on the worker count. workers <= 1 takes the serial reference path;
// more workers take the OpenMP path over the same per-slot kernel.
template <typename F>
auto run_trials(int count, uint64_t master, F&& fn, int workers = 0)
    -> std::vector<decltype(fn(0, uint64_t{}))> {
  using R = decltype(fn(0, uint64_t{}));
  std::vector<R> out((size_t)count);
  const int w = trial_workers(workers);
#ifdef Q2MPC_HAVE_OPENMP
  if (w > 1) {
#pragma omp parallel for num_threads(w) schedule(dynamic)
    for (int i = 0; i < count; ++i)
      out[(size_t)i] = fn(i, SplitMix::stream_seed(master, (uint64_t)i));
    return out;
  }
#endif
  (void)w;
  for (int i = 0; i < count; ++i)
    out[(size_t)i] = fn(i, SplitMix::stream_seed(master, (uint64_t)i));
  return out;
}

}  // namespace q2mpc
