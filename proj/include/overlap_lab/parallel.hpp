#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace overlap_lab {

/// Evaluates f(i) for i in [0, count) on up to `threads` workers and returns the
/// results in index order. Work is handed out in fixed chunks; since f must
/// depend only on i, the output does not depend on the thread count. The
/// exception from the lowest failing chunk is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, F&& f) {
    constexpr std::size_t chunk = 64;
    std::vector<T> out(count);
    const std::size_t chunks = (count + chunk - 1) / chunk;
    std::vector<std::exception_ptr> errors(chunks);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                const std::size_t end = std::min(count, (c + 1) * chunk);
                for (std::size_t i = c * chunk; i < end; ++i) out[i] = f(i);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(chunks, 1));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

} // namespace overlap_lab
