#include "score_dag/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace score_dag {
namespace {

std::atomic<int> g_override{0};

int default_threads() {
    if (const char* env = std::getenv("SCORE_DAG_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int internal_threads() {
    const int o = g_override.load();
    if (o > 0) return o;
    static const int fallback = default_threads();
    return fallback;
}

void set_internal_threads(int threads) { g_override.store(std::max(0, threads)); }

void parallel_blocks(int count, const std::function<void(int, int)>& body) {
    if (count <= 0) return;
    // Small problems are not worth a thread launch.
    const int workers = std::min(internal_threads(), std::max(1, count / 64));
    if (workers <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, w, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace score_dag
