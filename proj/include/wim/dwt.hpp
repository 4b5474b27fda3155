#ifndef WIM_DWT_HPP
#define WIM_DWT_HPP

#include <stdexcept>
#include <vector>

#include "wim/image.hpp"

namespace wim {

enum class Subband { LL, LH, HL, HH };

inline const char* subband_name(Subband s) {
  switch (s) {
    case Subband::LL: return "LL";
    case Subband::LH: return "LH";
    case Subband::HL: return "HL";
    case Subband::HH: return "HH";
  }
  return "?";
}

struct Rect {
  int x0, y0, w, h;
};

/// Multi-level CDF 9/7 coefficient pyramid stored in the in-place Mallat
/// layout: one width*height array, LL of the deepest level in the top-left
/// corner, detail quadrants HL (top-right), LH (bottom-left), HH
/// (bottom-right) at each level.
struct WaveletPyramid {
  int levels = 0;
  int width = 0;
  int height = 0;
  std::vector<double> coeff;

  WaveletPyramid() = default;
  WaveletPyramid(int lv, int w, int h)
      : levels(lv), width(w), height(h), coeff(static_cast<size_t>(w) * h, 0.0) {}

  double& at(int y, int x) { return coeff[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return coeff[static_cast<size_t>(y) * width + x]; }

  bool same_layout(const WaveletPyramid& o) const {
    return levels == o.levels && width == o.width && height == o.height;
  }

  /// Rectangle of a subband. LL is only valid at level == levels.
  Rect band(Subband s, int level) const {
    int bw = width >> level, bh = height >> level;
    switch (s) {
      case Subband::LL: return {0, 0, bw, bh};
      case Subband::HL: return {bw, 0, bw, bh};
      case Subband::LH: return {0, bh, bw, bh};
      case Subband::HH: return {bw, bh, bw, bh};
    }
    return {0, 0, 0, 0};
  }
};

namespace cdf97 {

// lifting constants of the irreversible 9/7 filter pair
constexpr double kAlpha = -1.586134342059924;
constexpr double kBeta = -0.052980118572961;
constexpr double kGamma = 0.882911075530934;
constexpr double kDelta = 0.443506852043971;
constexpr double kScale = 1.230174104914001;

// One analysis pass on n samples (n even, n >= 2): lowpass into out[0..n/2),
// highpass into out[n/2..n). Boundary clamps implement whole-sample
// symmetric extension.
inline void analyze(const double* in, double* out, int n, int stride) {
  int half = n / 2;
  std::vector<double> s(half), d(half);
  for (int i = 0; i < half; ++i) {
    s[i] = in[static_cast<size_t>(2 * i) * stride];
    d[i] = in[static_cast<size_t>(2 * i + 1) * stride];
  }
  auto sp = [&](int i) { return s[i + 1 < half ? i + 1 : half - 1]; };
  auto dm = [&](int i) { return d[i > 0 ? i - 1 : 0]; };
  for (int i = 0; i < half; ++i) d[i] += kAlpha * (s[i] + sp(i));
  for (int i = 0; i < half; ++i) s[i] += kBeta * (dm(i) + d[i]);
  for (int i = 0; i < half; ++i) d[i] += kGamma * (s[i] + sp(i));
  for (int i = 0; i < half; ++i) s[i] += kDelta * (dm(i) + d[i]);
  for (int i = 0; i < half; ++i) {
    out[static_cast<size_t>(i) * stride] = s[i] * kScale;
    out[static_cast<size_t>(half + i) * stride] = d[i] / kScale;
  }
}

// Exact inverse of analyze (lifting steps undone in reverse order).
inline void synthesize(const double* in, double* out, int n, int stride) {
  int half = n / 2;
  std::vector<double> s(half), d(half);
  for (int i = 0; i < half; ++i) {
    s[i] = in[static_cast<size_t>(i) * stride] / kScale;
    d[i] = in[static_cast<size_t>(half + i) * stride] * kScale;
  }
  auto sp = [&](int i) { return s[i + 1 < half ? i + 1 : half - 1]; };
  auto dm = [&](int i) { return d[i > 0 ? i - 1 : 0]; };
  for (int i = 0; i < half; ++i) s[i] -= kDelta * (dm(i) + d[i]);
  for (int i = 0; i < half; ++i) d[i] -= kGamma * (s[i] + sp(i));
  for (int i = 0; i < half; ++i) s[i] -= kBeta * (dm(i) + d[i]);
  for (int i = 0; i < half; ++i) d[i] -= kAlpha * (s[i] + sp(i));
  for (int i = 0; i < half; ++i) {
    out[static_cast<size_t>(2 * i) * stride] = s[i];
    out[static_cast<size_t>(2 * i + 1) * stride] = d[i];
  }
}

}  // namespace cdf97

namespace detail {

inline void check_divisible(int w, int h, int levels) {
  if (levels < 1) throw std::invalid_argument("dwt: levels must be >= 1");
  int f = 1 << levels;
  if (w % f != 0 || h % f != 0 || w / f < 1 || h / f < 1)
    throw std::invalid_argument("dwt: dimensions not divisible by 2^levels");
}

}  // namespace detail

/// Separable 2D CDF 9/7 analysis, applied recursively to the LL quadrant.
inline WaveletPyramid forward_dwt(const Image& img, int levels) {
  detail::check_divisible(img.width, img.height, levels);
  WaveletPyramid pyr(levels, img.width, img.height);
  pyr.coeff = img.data;
  std::vector<double> line, tmp;
  for (int lv = 0; lv < levels; ++lv) {
    int w = img.width >> lv, h = img.height >> lv;
    line.resize(static_cast<size_t>(std::max(w, h)));
    tmp.resize(line.size());
    for (int y = 0; y < h; ++y) {
      double* row = &pyr.at(y, 0);
      cdf97::analyze(row, line.data(), w, 1);
      for (int x = 0; x < w; ++x) row[x] = line[x];
    }
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) line[y] = pyr.at(y, x);
      cdf97::analyze(line.data(), tmp.data(), h, 1);
      for (int y = 0; y < h; ++y) pyr.at(y, x) = tmp[y];
    }
  }
  return pyr;
}

/// Exact synthesis inverse of forward_dwt.
inline Image inverse_dwt(const WaveletPyramid& pyr) {
  detail::check_divisible(pyr.width, pyr.height, pyr.levels);
  if (pyr.coeff.size() != static_cast<size_t>(pyr.width) * pyr.height)
    throw std::invalid_argument("inverse_dwt: malformed pyramid");
  Image img(pyr.width, pyr.height);
  img.data = pyr.coeff;
  std::vector<double> line, tmp;
  for (int lv = pyr.levels - 1; lv >= 0; --lv) {
    int w = pyr.width >> lv, h = pyr.height >> lv;
    line.resize(static_cast<size_t>(std::max(w, h)));
    tmp.resize(line.size());
    for (int x = 0; x < w; ++x) {
      for (int y = 0; y < h; ++y) line[y] = img.at(y, x);
      cdf97::synthesize(line.data(), tmp.data(), h, 1);
      for (int y = 0; y < h; ++y) img.at(y, x) = tmp[y];
    }
    for (int y = 0; y < h; ++y) {
      double* row = &img.at(y, 0);
      for (int x = 0; x < w; ++x) line[x] = row[x];
      cdf97::synthesize(line.data(), row, w, 1);
    }
  }
  return img;
}

}  // namespace wim

#endif  // WIM_DWT_HPP
