#include "cohere/rng.hpp"

#include <cmath>
#include <numbers>

namespace cohere::rng {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;  // splitmix64 step; keeps 0 off its fixed point
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  // golden-ratio increment keeps distinct streams far apart before mixing
  return mix64(master + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) noexcept {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(prod);
  hi = static_cast<std::uint32_t>(prod >> 32);
}

inline Philox4x32::Counter round_once(const Philox4x32::Counter& c, const Philox4x32::Key& k) noexcept {
  std::uint32_t lo0, hi0, lo1, hi1;
  mul_hi_lo(kPhiloxM0, c[0], lo0, hi0);
  mul_hi_lo(kPhiloxM1, c[2], lo1, hi1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter counter, Key key) noexcept {
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    counter = round_once(counter, key);
  }
  return counter;
}

EntryStream::EntryStream(std::uint64_t seed, std::uint64_t entry_index, std::uint32_t domain_tag) noexcept {
  const std::uint64_t k = mix64(seed);
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  base_ = {static_cast<std::uint32_t>(entry_index), static_cast<std::uint32_t>(entry_index >> 32), 0,
           domain_tag};
}

void EntryStream::refill() noexcept {
  Philox4x32::Counter ctr = base_;
  ctr[2] = draw_++;
  const auto out = Philox4x32::block(ctr, key_);
  buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  avail_ = 2;
}

std::uint64_t EntryStream::next_u64() noexcept {
  if (avail_ == 0) refill();
  return buf_[--avail_];
}

double EntryStream::next_uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double EntryStream::next_uniform_pos() noexcept {
  return 1.0 - next_uniform();
}

double EntryStream::next_normal() noexcept {
  const double u1 = next_uniform_pos();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace cohere::rng
