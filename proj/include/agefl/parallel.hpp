// Deterministic parallel loops and order-independent reductions.
//
// Work items write to pre-assigned slots, and reductions run sequentially over
// the collected values (pairwise summation), so results are bit-identical for
// any thread count. AGEFL_THREADS caps the number of worker threads.
#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace agefl {

// Number of worker threads: AGEFL_THREADS if set (min 1), else hardware
// concurrency.
std::size_t worker_thread_count();

// Invoke fn(i) for i in [0, n). Blocks until all items complete; the first
// exception thrown by any item is rethrown. fn must only touch item-local
// state (typically slot i of a results vector).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Sequential version used inside already-parallel regions.
void serial_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Pairwise (cascade) summation; deterministic and more accurate than a naive
// left fold.
double pairwise_sum(std::span<const double> values);

struct MeanStdErr {
    double mean = 0.0;
    double std_err = 0.0;
};

// Sample mean and standard error of the mean (0 for fewer than two values).
MeanStdErr mean_std_err(std::span<const double> values);

} // namespace agefl
