#pragma once

#include <cstdint>
#include <vector>

#include "lightfol/geometry.hpp"

namespace lightfol {

// 64-bit LCG: state ← state·6364136223846793005 + 1442695040888963407,
// output (state >> 11)·2^-53 in [0, 1). Reproducible bit for bit.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

struct Box {
  std::vector<double> lo, hi;
};

// Samples drawn coordinate by coordinate, sample by sample.
std::vector<Point> sample_box(const Box& box, int count, std::uint64_t seed);

}  // namespace lightfol
