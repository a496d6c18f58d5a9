#pragma once

#include "xplab/lattice.hpp"

#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace xplab::detail {

// Evaluates fn(c) for every chunk c and returns the results in chunk order. The chunking is
// fixed by the caller, so the final reduction does not depend on the worker count.
template <class T, class Fn>
std::vector<T> chunked_map(std::uint64_t chunks, Fn&& fn)
{
    std::vector<T> out(chunks);
    const int workers = static_cast<int>(std::min<std::uint64_t>(thread_limit(), chunks));
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c)
            out[c] = fn(c);
        return out;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    auto work = [&] {
        try {
            for (std::uint64_t c = next++; c < chunks && !failed; c = next++)
                out[c] = fn(c);
        } catch (...) {
            if (!failed.exchange(true))
                err = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    if (err)
        std::rethrow_exception(err);
    return out;
}

} // namespace xplab::detail
