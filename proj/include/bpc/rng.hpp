#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace bpc {

/// Counter-based Philox4x64-10 generator (Salmon et al., SC'11 constants).
///
/// Each (seed, stream) pair keys an independent sequence, so Monte Carlo
/// trials can draw from disjoint streams and produce identical results
/// whether they run serially or fanned out across threads.
class Philox {
 public:
  Philox(std::uint64_t seed, std::uint64_t stream) : key0_(seed), key1_(stream) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      generate_block();
      pos_ = 0;
    }
    return buffer_[pos_++];
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n). Plain modulo; the bias is ~2^-58 for the small
  /// n used here.
  std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

  /// Unit-rate exponential variate.
  double next_exponential() { return -std::log1p(-next_double()); }

  /// Poisson variate by counting unit-rate arrivals in [0, mean]. Costs
  /// O(mean) exponential draws, which keeps the sampler exact and portable
  /// at the cell sizes used here.
  std::int64_t next_poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be >= 0");
    std::int64_t count = 0;
    double arrival = next_exponential();
    while (arrival < mean) {
      ++count;
      arrival += next_exponential();
    }
    return count;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

  static void mul_hi_lo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                        std::uint64_t& lo) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  void generate_block() {
    std::uint64_t c0 = counter_, c1 = 0, c2 = 0, c3 = 0;
    std::uint64_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 += kWeyl0;
        k1 += kWeyl1;
      }
      std::uint64_t hi0, lo0, hi1, lo1;
      mul_hi_lo(kMul0, c0, hi0, lo0);
      mul_hi_lo(kMul1, c2, hi1, lo1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      // note the rotated lane order: (hi1^c1^k0, lo1, hi0^c3^k1, lo0)
    }
    buffer_[0] = c0;
    buffer_[1] = c1;
    buffer_[2] = c2;
    buffer_[3] = c3;
    ++counter_;
  }

  std::uint64_t key0_;
  std::uint64_t key1_;
  std::uint64_t counter_ = 0;
  std::uint64_t buffer_[4] = {};
  int pos_ = 4;
};

}  // namespace bpc
