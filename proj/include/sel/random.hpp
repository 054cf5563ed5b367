#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <cmath>
#include <random>

namespace sel {

/// A random stream keyed by (seed, index). Streams with different keys are
/// statistically independent; the same key always reproduces the same draws.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Worker count for parallel loops (0 = hardware concurrency). Results never
/// depend on this value.
void set_thread_count(unsigned count) noexcept;
unsigned thread_count() noexcept;

/// Items per random stream in parallel_draws.
inline constexpr std::size_t kStreamBlock = 512;

/// Runs body(i) for i in [0, count) on the worker pool.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// Runs body(i, stream) for i in [0, count); item i draws from the stream
/// (seed, stream_base + i / kStreamBlock), so the output is identical for any
/// worker count.
void parallel_draws(std::size_t count, std::uint64_t seed, std::uint64_t stream_base,
                    const std::function<void(std::size_t, Stream&)>& body);

}  // namespace sel
