#include "lightfol/sampling.hpp"

namespace lightfol {

std::vector<Point> sample_box(const Box& box, int count, std::uint64_t seed) {
  if (box.lo.size() != box.hi.size()) throw Error(ErrorKind::Validation, "box bounds differ in length");
  Lcg rng(seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int s = 0; s < count; ++s) {
    Point p(box.lo.size());
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = rng.uniform(box.lo[j], box.hi[j]);
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace lightfol
