#include <catch_amalgamated.hpp>

#include "test_common.hpp"
#include "wim/dwt.hpp"

using namespace wim;

namespace {

// Published irreversible 9/7 analysis taps (unit-DC lowpass convention),
// rescaled by the lifting normalization used here: lowpass x K^2,
// highpass x 1/K^2 with K = 1.230174104914001.
const double kK2 = cdf97::kScale * cdf97::kScale;
const double kLo[9] = {0.026748757410810 * kK2,  -0.016864118442875 * kK2,
                       -0.078223266528990 * kK2, 0.266864118442875 * kK2,
                       0.602949018236360 * kK2,  0.266864118442875 * kK2,
                       -0.078223266528990 * kK2, -0.016864118442875 * kK2,
                       0.026748757410810 * kK2};
const double kHi[7] = {0.091271763114250 / kK2,  -0.057543526228500 / kK2,
                       -0.591271763114250 / kK2, 1.115087052457000 / kK2,
                       -0.591271763114250 / kK2, -0.057543526228500 / kK2,
                       0.091271763114250 / kK2};

double sym(const std::vector<double>& x, int i) {
  int n = (int)x.size();
  while (i < 0 || i >= n) i = i < 0 ? -i : 2 * (n - 1) - i;
  return x[(size_t)i];
}

// Independent oracle: direct convolution with whole-sample symmetric
// extension, lowpass phase at even samples, highpass at odd.
std::vector<double> conv_analyze(const std::vector<double>& x) {
  int n = (int)x.size(), half = n / 2;
  std::vector<double> out((size_t)n);
  for (int k = 0; k < half; ++k) {
    double lo = 0.0, hi = 0.0;
    for (int t = -4; t <= 4; ++t) lo += kLo[t + 4] * sym(x, 2 * k + t);
    for (int t = -3; t <= 3; ++t) hi += kHi[t + 3] * sym(x, 2 * k + 1 + t);
    out[(size_t)k] = lo;
    out[(size_t)(half + k)] = hi;
  }
  return out;
}

}  // namespace

TEST_CASE("1D lifting matches the direct-convolution oracle") {
  for (int n : {8, 16, 32, 64}) {
    wim::Image dummy(1, 1);
    std::mt19937_64 rng((uint64_t)n);
    std::vector<double> x((size_t)n);
    for (double& v : x) v = (double)(rng() >> 11) * 0x1p-53;
    std::vector<double> lifted((size_t)n);
    cdf97::analyze(x.data(), lifted.data(), n, 1);
    std::vector<double> ref = conv_analyze(x);
    CHECK(wimtest::max_abs_diff(lifted, ref) < 1e-12);
  }
}

TEST_CASE("2D single-level impulse response equals the filter taps") {
  // impulse at the grid center; single-level output rows/columns carry the
  // analysis taps arranged by polyphase position
  int n = 32;
  Image x(n, n);
  x.at(16, 16) = 1.0;
  WaveletPyramid pyr = forward_dwt(x, 1);
  // separable reference via the convolution oracle applied to rows then cols
  std::vector<std::vector<double>> cols((size_t)n, std::vector<double>((size_t)n));
  for (int y = 0; y < n; ++y) {
    std::vector<double> row((size_t)n);
    for (int xx = 0; xx < n; ++xx) row[(size_t)xx] = x.at(y, xx);
    std::vector<double> t = conv_analyze(row);
    for (int xx = 0; xx < n; ++xx) cols[(size_t)xx][(size_t)y] = t[(size_t)xx];
  }
  double worst = 0.0;
  for (int xx = 0; xx < n; ++xx) {
    std::vector<double> t = conv_analyze(cols[(size_t)xx]);
    for (int y = 0; y < n; ++y)
      worst = std::max(worst, std::abs(pyr.at(y, xx) - t[(size_t)y]));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("constant image: details vanish, LL is constant") {
  Image c(64, 64, 0.7);
  WaveletPyramid pyr = forward_dwt(c, 3);
  Rect ll = pyr.band(Subband::LL, 3);
  double ll_val = pyr.at(0, 0);
  for (int y = 0; y < pyr.height; ++y)
    for (int x = 0; x < pyr.width; ++x) {
      if (y < ll.h && x < ll.w) {
        CHECK(pyr.at(y, x) == Catch::Approx(ll_val).margin(1e-10));
      } else {
        CHECK(std::abs(pyr.at(y, x)) < 1e-10);
      }
    }
  // the 1D lowpass has DC gain K^2, so 2D LL gain is K^4 per level
  double expected = 0.7 * std::pow(cdf97::kScale, 12.0);
  CHECK(ll_val == Catch::Approx(expected).margin(1e-9));
}

TEST_CASE("perfect reconstruction both directions") {
  for (int levels = 1; levels <= 4; ++levels) {
    Image x = wimtest::random_image(64, 48, 100u + (unsigned)levels);
    Image back = inverse_dwt(forward_dwt(x, levels));
    CHECK(wimtest::max_abs_diff(x.data, back.data) < 1e-9);

    WaveletPyramid p(levels, 64, 48);
    std::mt19937_64 rng(7u + (unsigned)levels);
    for (double& v : p.coeff) v = (double)(rng() >> 11) * 0x1p-53 - 0.5;
    WaveletPyramid q = forward_dwt(inverse_dwt(p), levels);
    CHECK(wimtest::max_abs_diff(p.coeff, q.coeff) < 1e-9);
  }
}

TEST_CASE("linearity") {
  Image x = wimtest::random_image(32, 32, 5);
  Image y = wimtest::random_image(32, 32, 6);
  double a = 1.7, b = -0.4;
  Image z(32, 32);
  for (size_t i = 0; i < z.data.size(); ++i) z.data[i] = a * x.data[i] + b * y.data[i];
  WaveletPyramid pz = forward_dwt(z, 2);
  WaveletPyramid px = forward_dwt(x, 2);
  WaveletPyramid py = forward_dwt(y, 2);
  for (size_t i = 0; i < pz.coeff.size(); ++i)
    CHECK(pz.coeff[i] ==
          Catch::Approx(a * px.coeff[i] + b * py.coeff[i]).margin(1e-10));
}

TEST_CASE("near-orthogonality witness") {
  for (uint64_t seed : {11u, 12u, 13u}) {
    Image x = wimtest::random_image(64, 64, seed, -0.5, 0.5);
    WaveletPyramid p = forward_dwt(x, 4);
    double ratio = l2_norm(p.coeff) / l2_norm(x.data);
    CHECK(std::abs(ratio - 1.0) < 0.05);
  }
}

TEST_CASE("all-zero pyramid inverts to the zero image") {
  WaveletPyramid p(2, 16, 16);
  Image img = inverse_dwt(p);
  for (double v : img.data) CHECK(v == 0.0);
}

TEST_CASE("single LL coefficient yields the 2D synthesis scaling pattern") {
  // direct synthesis oracle: invert via the transpose relation is not
  // available; instead check against a synthesis convolution built from the
  // inverse transform's own 1D impulse responses cross product
  int n = 16;
  WaveletPyramid p(1, n, n);
  p.at(4, 5) = 1.0;  // LL position (4,5)
  Image img = inverse_dwt(p);
  // separable: response = s_col x s_row where s is the 1D synthesis of a
  // unit lowpass impulse
  std::vector<double> e((size_t)n, 0.0), srow((size_t)n), scol((size_t)n);
  e[5] = 1.0;
  cdf97::synthesize(e.data(), srow.data(), n, 1);
  std::fill(e.begin(), e.end(), 0.0);
  e[4] = 1.0;
  cdf97::synthesize(e.data(), scol.data(), n, 1);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      CHECK(img.at(y, x) == Catch::Approx(scol[(size_t)y] * srow[(size_t)x]).margin(1e-12));
}

TEST_CASE("dimension preconditions") {
  Image odd(18, 18);
  CHECK_THROWS(forward_dwt(odd, 2));  // 18 not divisible by 4
  Image ok(16, 16);
  CHECK_THROWS(forward_dwt(ok, 0));
}
