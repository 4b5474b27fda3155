#ifndef WIM_TEST_COMMON_HPP
#define WIM_TEST_COMMON_HPP

#include <random>

#include "wim/image.hpp"

namespace wimtest {

inline wim::Image random_image(int w, int h, uint64_t seed, double lo = 0.0,
                               double hi = 1.0) {
  std::mt19937_64 rng(seed);
  wim::Image img(w, h);
  for (double& v : img.data)
    v = lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1p-53);
  return img;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace wimtest

#endif
