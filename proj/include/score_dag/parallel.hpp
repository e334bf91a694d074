#pragma once

#include <functional>

namespace score_dag {

/// Worker count for internal data parallelism: SCORE_DAG_THREADS when set to a
/// positive integer, otherwise std::thread::hardware_concurrency().
int internal_threads();

/// Overrides internal_threads() for the current process (0 restores the default).
void set_internal_threads(int threads);

/// Splits [0, count) into contiguous blocks and runs body(begin, end) on each,
/// one block per worker. Blocks never overlap, so per-index results do not
/// depend on the worker count.
void parallel_blocks(int count, const std::function<void(int, int)>& body);

}  // namespace score_dag
