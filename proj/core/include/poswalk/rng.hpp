#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace poswalk {

// Philox 4x32-10 counter-based generator.
//
// A generator is addressed by (seed, stream): the seed fills the key, the
// stream occupies the top counter word. Distinct streams are statistically
// independent, so batch samplers hand stream = sample index to each worker
// and the output is reproducible bit-for-bit regardless of scheduling.
class PhiloxRng {
 public:
  explicit PhiloxRng(uint64_t seed, uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    reset();
  }

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  // Fresh generator on another stream of the same seed.
  PhiloxRng split(uint64_t stream) const { return PhiloxRng(seed_, stream); }

  void reset() {
    counter_ = 0;
    idx_ = 4;
    have_cached_normal_ = false;
  }

  uint32_t next_u32() {
    if (idx_ >= 4) refill();
    return block_[idx_++];
  }

  uint64_t next_u64() {
    uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // Uniform on the open interval (0,1); never returns an endpoint, so it is
  // safe under log().
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  // Standard normal via Box-Muller with the usual pair cache.
  double normal() {
    if (have_cached_normal_) {
      have_cached_normal_ = false;
      return cached_normal_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(a);
    have_cached_normal_ = true;
    return r * std::cos(a);
  }

 private:
  static void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
  }

  void refill() {
    uint32_t c0 = static_cast<uint32_t>(counter_);
    uint32_t c1 = static_cast<uint32_t>(counter_ >> 32);
    uint32_t c2 = static_cast<uint32_t>(stream_);
    uint32_t c3 = static_cast<uint32_t>(stream_ >> 32);
    uint32_t k0 = static_cast<uint32_t>(seed_);
    uint32_t k1 = static_cast<uint32_t>(seed_ >> 32);
    for (int round = 0; round < 10; ++round) {
      uint32_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2511F53u, c0, hi0, lo0);
      mulhilo(0xCD9E8D57u, c2, hi1, lo1);
      uint32_t n0 = hi1 ^ c1 ^ k0;
      uint32_t n1 = lo1;
      uint32_t n2 = hi0 ^ c3 ^ k1;
      uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    block_ = {c0, c1, c2, c3};
    ++counter_;
    idx_ = 0;
  }

  uint64_t seed_;
  uint64_t stream_;
  uint64_t counter_ = 0;
  std::array<uint32_t, 4> block_{};
  int idx_ = 4;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace poswalk
