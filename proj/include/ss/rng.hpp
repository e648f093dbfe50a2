#pragma once

#include <cstdint>

namespace ss {

// Portable rand(): the classic 31-bit LCG with 15-bit output, so scripts give
// the same numbers on every host.
class Rng {
 public:
  static constexpr int kRandMax = 32767;

  void seed(std::uint32_t s) { state_ = s; }

  int next() {
    state_ = (state_ * 1103515245u + 12345u) & 0x7fffffffu;
    return static_cast<int>((state_ >> 16) & 0x7fffu);
  }

  // [0, 1)
  double uniform() { return next() / (kRandMax + 1.0); }

 private:
  std::uint32_t state_ = 1;
};

}  // namespace ss
