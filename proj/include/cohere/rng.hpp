#pragma once

#include <array>
#include <cstdint>

namespace cohere::rng {

// splitmix64 finalizer; full-avalanche 64-bit mixer.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Keyed child seed for a (master seed, stream index) pair. Streams derived
// from distinct indices are statistically independent.
std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) noexcept;

// Philox 4x32, 10 rounds. Counter-based: output is a pure function of
// (counter, key), so any parallel decomposition of the counter space
// reproduces identical values.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key) noexcept;
};

// One logical random stream per matrix entry. The counter encodes
// (entry index, draw index, domain tag); the key encodes the seed.
// Rejection samplers may consume any number of draws without affecting
// other entries' streams.
class EntryStream {
 public:
  EntryStream(std::uint64_t seed, std::uint64_t entry_index, std::uint32_t domain_tag) noexcept;

  std::uint64_t next_u64() noexcept;
  // 53-bit uniform on [0, 1).
  double next_uniform() noexcept;
  // uniform on (0, 1]; safe as a log() argument.
  double next_uniform_pos() noexcept;
  // standard normal via Box-Muller.
  double next_normal() noexcept;

 private:
  void refill() noexcept;

  Philox4x32::Counter base_;
  Philox4x32::Key key_;
  std::uint32_t draw_ = 0;
  std::uint64_t buf_[2];
  int avail_ = 0;
};

}  // namespace cohere::rng
