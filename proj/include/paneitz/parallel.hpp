#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace paneitz {

/// Worker count: hardware concurrency, capped by PANEITZ_THREADS when set.
inline unsigned thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("PANEITZ_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) {
                hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
            }
        } catch (...) {
        }
    }
    return hw;
}

/// Calls body(i) for i in [0, count). Each index is written by exactly one
/// worker, so results never depend on the schedule.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const unsigned workers = thread_count();
    constexpr std::size_t min_chunk = 1 << 15;
    if (workers <= 1 || count < 2 * min_chunk) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    const std::size_t chunks = std::min<std::size_t>(workers, count / min_chunk);
    const std::size_t per = (count + chunks - 1) / chunks;
    std::vector<std::jthread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t lo = c * per;
        const std::size_t hi = std::min(count, lo + per);
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) {
                body(i);
            }
        });
    }
}

/// Pairwise (cascade) summation of term(i) over [lo, hi). Fixed recursion
/// order, so the result is bitwise reproducible.
template <class Term>
double pairwise_sum(std::size_t lo, std::size_t hi, const Term& term) {
    constexpr std::size_t leaf = 128;
    if (hi - lo <= leaf) {
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            acc += term(i);
        }
        return acc;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

template <class Term>
double pairwise_sum(std::size_t count, const Term& term) {
    return pairwise_sum(std::size_t{0}, count, term);
}

} // namespace paneitz
