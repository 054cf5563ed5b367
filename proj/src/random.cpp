#include "sel/random.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sel {

namespace {

std::atomic<unsigned> g_threads{0};

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t a = splitmix64(seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    engine_.seed(seq);
}

void set_thread_count(unsigned count) noexcept { g_threads.store(count); }

unsigned thread_count() noexcept {
    const unsigned requested = g_threads.load();
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Dynamic block scheduling; the first exception thrown by any worker is rethrown.
void run_blocks(std::size_t blocks, const std::function<void(std::size_t)>& block_body) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) block_body(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= blocks) return;
            try {
                block_body(b);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(blocks);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    constexpr std::size_t chunk = 64;
    const std::size_t blocks = (count + chunk - 1) / chunk;
    run_blocks(blocks, [&](std::size_t b) {
        const std::size_t end = std::min(count, (b + 1) * chunk);
        for (std::size_t i = b * chunk; i < end; ++i) body(i);
    });
}

void parallel_draws(std::size_t count, std::uint64_t seed, std::uint64_t stream_base,
                    const std::function<void(std::size_t, Stream&)>& body) {
    const std::size_t blocks = (count + kStreamBlock - 1) / kStreamBlock;
    run_blocks(blocks, [&](std::size_t b) {
        Stream stream(seed, stream_base + b);
        const std::size_t end = std::min(count, (b + 1) * kStreamBlock);
        for (std::size_t i = b * kStreamBlock; i < end; ++i) body(i, stream);
    });
}

}  // namespace sel
