#pragma once

#include <cstdint>
#include <random>

namespace seedtrace {

// Reproducible random stream. The stream for (master_seed, stream_index) is
// derived by hashing the pair through splitmix64 and feeding the result to a
// single-seed mt19937_64, so the draw sequence is a pure function of the two
// integers. Bounded draws use Lemire rejection on raw 64-bit outputs, not
// std::uniform_int_distribution, to keep sequences stable across standard
// library implementations.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed),
          stream_index_(stream_index),
          engine_(derive_seed(master_seed, stream_index)) {}

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on {0, 1, ..., bound-1}; bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound) {
        // Lemire's multiply-with-rejection.
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        std::uint64_t low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

  private:
    static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
        return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x1234567899abcdefULL));
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

}  // namespace seedtrace
