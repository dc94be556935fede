#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace rodsim::detail {

// Calls f(i) for i in [0, n) on up to `threads` workers. Work items write to
// disjoint slots, so the caller decides the reduction order.
template <typename F>
void parallel_for(int n, int threads, F&& f) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int k = 0; k < threads; ++k) {
        pool.emplace_back([&, k] {
            try {
                for (int i = k; i < n; i += threads) f(i);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace rodsim::detail
