#ifndef WIM_COEFF_HPP
#define WIM_COEFF_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wim/dwt.hpp"
#include "wim/image.hpp"

namespace wim {

/// Boolean mask over a pyramid layout; true marks a known coefficient
/// (the index set I).
struct CoeffMask {
  int levels = 0;
  int width = 0;
  int height = 0;
  std::vector<uint8_t> known;

  CoeffMask() = default;
  CoeffMask(int lv, int w, int h, bool value = true)
      : levels(lv), width(w), height(h),
        known(static_cast<size_t>(w) * h, value ? 1 : 0) {}

  uint8_t& at(int y, int x) { return known[static_cast<size_t>(y) * width + x]; }
  uint8_t at(int y, int x) const { return known[static_cast<size_t>(y) * width + x]; }

  bool matches(const WaveletPyramid& p) const {
    return levels == p.levels && width == p.width && height == p.height;
  }

  size_t known_count() const {
    size_t n = 0;
    for (uint8_t k : known) n += k;
    return n;
  }

  Rect band(Subband s, int level) const {
    return WaveletPyramid{levels, width, height}.band(s, level);
  }

  bool all_ll_known() const {
    Rect r = band(Subband::LL, levels);
    for (int y = 0; y < r.h; ++y)
      for (int x = 0; x < r.w; ++x)
        if (!at(r.y0 + y, r.x0 + x)) return false;
    return true;
  }
};

/// Received data for one degradation scenario: the known coefficients
/// (zero-filled elsewhere), their mask, the noise level, and the observed
/// component f0 derived from them.
struct ObservedData {
  WaveletPyramid beta;
  CoeffMask mask;
  Image f0;
  double noise_sigma = 0.0;
};

/// P_I: keeps coefficients on the known set, zeroes the rest.
inline WaveletPyramid project_known(const WaveletPyramid& pyr, const CoeffMask& mask) {
  if (!mask.matches(pyr)) throw std::invalid_argument("project_known: layout mismatch");
  WaveletPyramid out = pyr;
  for (size_t i = 0; i < out.coeff.size(); ++i)
    if (!mask.known[i]) out.coeff[i] = 0.0;
  return out;
}

/// P_C: zeroes coefficients on the known set, keeps the rest. The result
/// lies in C = {gamma : P_I(gamma) = 0}.
inline WaveletPyramid project_missing(const WaveletPyramid& pyr, const CoeffMask& mask) {
  if (!mask.matches(pyr)) throw std::invalid_argument("project_missing: layout mismatch");
  WaveletPyramid out = pyr;
  for (size_t i = 0; i < out.coeff.size(); ++i)
    if (mask.known[i]) out.coeff[i] = 0.0;
  return out;
}

/// Mask losing exactly one detail subband.
inline CoeffMask make_subband_loss_mask(int levels, int width, int height,
                                        Subband target, int level) {
  if (target == Subband::LL)
    throw std::invalid_argument("subband loss targets a detail subband");
  if (level < 1 || level > levels)
    throw std::invalid_argument("subband level out of range");
  CoeffMask mask(levels, width, height, true);
  Rect r = mask.band(target, level);
  for (int y = 0; y < r.h; ++y)
    for (int x = 0; x < r.w; ++x) mask.at(r.y0 + y, r.x0 + x) = 0;
  return mask;
}

namespace detail {

inline bool in_ll(int levels, int width, int height, size_t idx) {
  int x = static_cast<int>(idx % width);
  int y = static_cast<int>(idx / width);
  return x < (width >> levels) && y < (height >> levels);
}

}  // namespace detail

/// Random-loss mask: keeps exactly round(keep_fraction * candidate_count)
/// coefficients, sampled without replacement. With keep_ll the LL subband
/// is always known and the fraction applies to detail coefficients only.
inline CoeffMask make_random_loss_mask(int levels, int width, int height,
                                       double keep_fraction, bool keep_ll,
                                       uint64_t seed) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
    throw std::invalid_argument("keep_fraction must be in (0,1]");
  CoeffMask mask(levels, width, height, false);
  std::vector<size_t> candidates;
  candidates.reserve(mask.known.size());
  for (size_t i = 0; i < mask.known.size(); ++i) {
    if (keep_ll && detail::in_ll(levels, width, height, i)) {
      mask.known[i] = 1;
    } else {
      candidates.push_back(i);
    }
  }
  size_t keep = static_cast<size_t>(
      std::llround(keep_fraction * static_cast<double>(candidates.size())));
  std::mt19937_64 rng(seed);
  // partial Fisher-Yates: the first `keep` slots become the kept sample
  for (size_t i = 0; i < keep; ++i) {
    size_t j = i + static_cast<size_t>(rng() % (candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    mask.known[candidates[i]] = 1;
  }
  return mask;
}

namespace detail {

/// Deterministic Box-Muller normal sampler on top of mt19937_64.
class GaussianSampler {
 public:
  explicit GaussianSampler(uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_open();
    double u2 = uniform_open();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

 private:
  double uniform_open() {
    // (0,1]: avoids log(0)
    return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1p-53;
  }
  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

Image interpolate_ll(const ObservedData& observed);

namespace detail {

inline Image choose_f0(const WaveletPyramid& beta, const CoeffMask& mask) {
  if (mask.all_ll_known()) return inverse_dwt(beta);
  ObservedData tmp{beta, mask, Image{}, 0.0};
  return interpolate_ll(tmp);
}

}  // namespace detail

/// Simulates coefficient loss (and optional Gaussian coefficient noise on
/// the surviving coefficients) for an original image.
inline ObservedData degrade(const Image& original, const CoeffMask& mask,
                            double noise_sigma, uint64_t seed) {
  WaveletPyramid alpha = forward_dwt(original, mask.levels);
  if (!mask.matches(alpha)) throw std::invalid_argument("degrade: layout mismatch");
  if (noise_sigma > 0.0) {
    detail::GaussianSampler noise(seed);
    for (size_t i = 0; i < alpha.coeff.size(); ++i)
      if (mask.known[i]) alpha.coeff[i] += noise_sigma * noise();
  }
  ObservedData obs;
  obs.beta = project_known(alpha, mask);
  obs.mask = mask;
  obs.noise_sigma = noise_sigma;
  obs.f0 = detail::choose_f0(obs.beta, obs.mask);
  return obs;
}

/// Fills unknown LL coefficients by nearest-neighbor interpolation on the
/// LL grid (Euclidean distance, ties broken by row-major scan order of the
/// known candidates), then inverse-transforms together with the known
/// detail coefficients.
inline Image interpolate_ll(const ObservedData& observed) {
  const CoeffMask& mask = observed.mask;
  WaveletPyramid filled = observed.beta;
  Rect ll = mask.band(Subband::LL, mask.levels);
  std::vector<std::pair<int, int>> known_cells;
  for (int y = 0; y < ll.h; ++y)
    for (int x = 0; x < ll.w; ++x)
      if (mask.at(ll.y0 + y, ll.x0 + x)) known_cells.emplace_back(y, x);
  if (known_cells.empty())
    throw std::runtime_error("interpolate_ll: no known LL coefficient");
  for (int y = 0; y < ll.h; ++y) {
    for (int x = 0; x < ll.w; ++x) {
      if (mask.at(ll.y0 + y, ll.x0 + x)) continue;
      // known_cells is in row-major order; replacing only on strictly
      // smaller distance keeps the first candidate among ties
      long best = -1;
      int by = 0, bx = 0;
      for (const auto& [ky, kx] : known_cells) {
        long d = static_cast<long>(ky - y) * (ky - y) +
                 static_cast<long>(kx - x) * (kx - x);
        if (best < 0 || d < best) {
          best = d;
          by = ky;
          bx = kx;
        }
      }
      filled.at(ll.y0 + y, ll.x0 + x) = filled.at(ll.y0 + by, ll.x0 + bx);
    }
  }
  return inverse_dwt(filled);
}

// ---------------------------------------------------------------------------
// scenario file format
//
// Text file:
//   WIM1 <width> <height> <levels> <sigma>
//   LL <levels> <rle>
//   LH <L> <rle> / HL <L> <rle> / HH <L> <rle>   for L = levels .. 1
// where <rle> is "<first-bit> <hex-run-length>..." with runs alternating
// between bit values, scanned row-major within the subband.
//
// The coefficient payload lives in "<path>.beta" as raw little-endian
// doubles in the same subband scan order.
// ---------------------------------------------------------------------------

namespace detail {

/// Canonical scan order: LL first, then levels coarse to fine, LH/HL/HH.
inline void for_each_band(int levels, const std::function<void(Subband, int)>& fn) {
  fn(Subband::LL, levels);
  for (int lv = levels; lv >= 1; --lv) {
    fn(Subband::LH, lv);
    fn(Subband::HL, lv);
    fn(Subband::HH, lv);
  }
}

inline void write_le_doubles(std::ostream& out, const std::vector<double>& v) {
  static_assert(sizeof(double) == 8);
  for (double x : v) {
    uint64_t bits;
    std::memcpy(&bits, &x, 8);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(b, 8);
  }
}

inline std::vector<double> read_le_doubles(std::istream& in, size_t n) {
  std::vector<double> v(n);
  for (size_t k = 0; k < n; ++k) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw std::runtime_error("truncated beta payload");
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
    double x;
    std::memcpy(&x, &bits, 8);
    v[k] = x;
  }
  return v;
}

}  // namespace detail

inline void save_observed(const ObservedData& obs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  char sigma_buf[64];
  std::snprintf(sigma_buf, sizeof sigma_buf, "%.17g", obs.noise_sigma);
  out << "WIM1 " << obs.mask.width << " " << obs.mask.height << " "
      << obs.mask.levels << " " << sigma_buf << "\n";
  std::vector<double> payload;
  payload.reserve(obs.beta.coeff.size());
  detail::for_each_band(obs.mask.levels, [&](Subband s, int lv) {
    Rect r = obs.mask.band(s, lv);
    out << subband_name(s) << " " << lv << " ";
    int run = 0;
    int cur = obs.mask.at(r.y0, r.x0);
    out << cur;
    for (int y = 0; y < r.h; ++y) {
      for (int x = 0; x < r.w; ++x) {
        payload.push_back(obs.beta.at(r.y0 + y, r.x0 + x));
        int bit = obs.mask.at(r.y0 + y, r.x0 + x);
        if (bit == cur) {
          ++run;
        } else {
          out << " " << std::hex << run << std::dec;
          cur = bit;
          run = 1;
        }
      }
    }
    out << " " << std::hex << run << std::dec << "\n";
  });
  if (!out) throw std::runtime_error("write failure: " + path);
  std::ofstream bout(path + ".beta", std::ios::binary);
  if (!bout) throw std::runtime_error("cannot write file: " + path + ".beta");
  detail::write_le_doubles(bout, payload);
  if (!bout) throw std::runtime_error("write failure: " + path + ".beta");
}

inline ObservedData load_observed(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string magic;
  int w, h, levels;
  double sigma;
  in >> magic >> w >> h >> levels >> sigma;
  if (magic != "WIM1" || !in) throw std::runtime_error("not a WIM1 scenario file: " + path);
  ObservedData obs;
  obs.mask = CoeffMask(levels, w, h, false);
  obs.beta = WaveletPyramid(levels, w, h);
  obs.noise_sigma = sigma;
  std::ifstream bin(path + ".beta", std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open file: " + path + ".beta");
  std::vector<double> payload =
      detail::read_le_doubles(bin, static_cast<size_t>(w) * h);
  size_t cursor = 0;
  detail::for_each_band(levels, [&](Subband s, int lv) {
    std::string name;
    int file_lv, first;
    in >> name >> file_lv >> first;
    if (!in || name != subband_name(s) || file_lv != lv)
      throw std::runtime_error("scenario file band order mismatch: " + path);
    Rect r = obs.mask.band(s, lv);
    size_t total = static_cast<size_t>(r.w) * r.h;
    size_t pos = 0;
    int cur = first;
    while (pos < total) {
      size_t run;
      in >> std::hex >> run >> std::dec;
      if (!in || pos + run > total)
        throw std::runtime_error("bad run-length data: " + path);
      for (size_t k = 0; k < run; ++k, ++pos) {
        int y = static_cast<int>(pos / r.w), x = static_cast<int>(pos % r.w);
        obs.mask.at(r.y0 + y, r.x0 + x) = static_cast<uint8_t>(cur);
      }
      cur = 1 - cur;
    }
    for (int y = 0; y < r.h; ++y)
      for (int x = 0; x < r.w; ++x)
        obs.beta.at(r.y0 + y, r.x0 + x) = payload[cursor++];
  });
  obs.f0 = detail::choose_f0(obs.beta, obs.mask);
  return obs;
}

}  // namespace wim

#endif  // WIM_COEFF_HPP
