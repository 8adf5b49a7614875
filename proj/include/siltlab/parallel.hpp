#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "siltlab/error.hpp"
#include "siltlab/rng.hpp"

namespace siltlab {

// Seeding and scheduling for Monte Carlo runs. Sample j is always drawn from
// stream floor(j / chunk), so estimates do not depend on the worker count.
struct McConfig {
    std::uint64_t seed = 1;
    unsigned workers = 1;  // 0 = hardware concurrency
    std::uint64_t chunk = 4096;
    Budget budget{};
};

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(stream, begin, end) once per chunk of [0, total) and returns the
// per-chunk results in chunk order. The caller reduces them in that order.
template <class Result, class Fn>
std::vector<Result> run_chunks(std::uint64_t total, const McConfig& cfg, Fn fn) {
    if (cfg.chunk == 0) {
        throw DomainError("chunk size must be positive");
    }
    const std::uint64_t n_chunks = (total + cfg.chunk - 1) / cfg.chunk;
    std::vector<Result> results(n_chunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) {
                return;
            }
            try {
                RngStream rng(cfg.seed, c);
                const std::uint64_t begin = c * cfg.chunk;
                const std::uint64_t end = std::min(total, begin + cfg.chunk);
                results[c] = fn(rng, begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n_chunks);
            }
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(cfg.workers), n_chunks));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return results;
}

}  // namespace siltlab
