#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace apdyn {

/// Splits [0, total) into fixed-size chunks (the chunk length never depends
/// on the worker count), processes them on `workers` threads, and supports
/// ordered early exit: once a chunk reports a hit via Result::found(),
/// chunks after it in index order may be skipped. Results land in slots
/// indexed by chunk, and the caller reduces them in chunk order, so the
/// outcome is identical for any worker count. Chunks before the winning one
/// are always processed.
template <typename Result, typename Fn>
std::vector<std::optional<Result>> run_ordered_chunks(long long total, long long chunk_len,
                                                      int workers, Fn&& fn) {
    long long n_chunks = total <= 0 ? 0 : (total + chunk_len - 1) / chunk_len;
    std::vector<std::optional<Result>> slots(static_cast<std::size_t>(n_chunks));
    if (n_chunks == 0) return slots;

    std::atomic<long long> next{0};
    std::atomic<long long> winner{n_chunks};
    std::exception_ptr first_error = nullptr;
    std::mutex err_mu;

    auto work = [&] {
        try {
            for (;;) {
                long long c = next.fetch_add(1);
                if (c >= n_chunks) return;
                if (c > winner.load(std::memory_order_relaxed)) continue;
                long long begin = c * chunk_len;
                long long end = std::min(total, begin + chunk_len);
                Result r = fn(begin, end, c);
                bool hit = r.found();
                slots[static_cast<std::size_t>(c)] = std::move(r);
                if (hit) {
                    long long cur = winner.load();
                    while (c < cur && !winner.compare_exchange_weak(cur, c)) {
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lk(err_mu);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (workers <= 1) {
        work();
    } else {
        int n_threads = static_cast<int>(std::min<long long>(workers, n_chunks));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return slots;
}

}  // namespace apdyn
