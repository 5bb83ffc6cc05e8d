#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wirepol {

/// results[i] = fn(i) for i in [0, count), on up to `threads` workers.
/// Output order is fixed by index; if any call throws, the exception of the
/// lowest failing index is rethrown.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t count, int threads, Fn&& fn) {
    std::vector<Result> results(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                results[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n_workers = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(count, 1));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

} // namespace wirepol
