#ifndef HAWKES_RNG_HPP
#define HAWKES_RNG_HPP

#include <cstdint>
#include <random>
#include <stdexcept>

namespace hawkes {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seedable stream of randomness. Streams with distinct (masterSeed,
/// streamIndex) pairs are derived by a counter scheme so replication loops
/// can fan out without sharing state.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed), stream_index_(stream_index) {
    std::uint64_t s = master_seed ^ (0xd1b54a32d192ed03ULL * (stream_index + 1));
    engine_.seed(splitmix64(s) ^ splitmix64(s));
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  // uniform on [0, 1)
  double uniform() {
    return std::generate_canonical<double, 53>(engine_);
  }

  double exponential(double rate = 1.0) {
    if (!(rate > 0.0)) {
      throw std::domain_error("rng: exponential rate must be > 0");
    }
    return std::exponential_distribution<double>(rate)(engine_);
  }

  long poisson(double mean) {
    return std::poisson_distribution<long>(mean)(engine_);
  }

  // uniform on {lo, ..., hi} inclusive
  long uniform_int(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

}  // namespace hawkes

#endif
