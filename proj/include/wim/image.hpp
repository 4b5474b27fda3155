#ifndef WIM_IMAGE_HPP
#define WIM_IMAGE_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

namespace wim {

/// Dense grayscale image, row-major, intensities nominally in [0,1].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  double& at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
  size_t size() const { return data.size(); }

  bool same_dims(const Image& o) const { return width == o.width && height == o.height; }
};

inline double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double l2_dist(const Image& a, const Image& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    double d = a.data[i] - b.data[i];
    s += d * d;
  }
  return std::sqrt(s);
}

/// Peak signal-to-noise ratio in dB with PEAK = 1.0.
/// Returns +infinity when the images agree exactly.
inline double psnr(const Image& reference, const Image& candidate) {
  if (!reference.same_dims(candidate))
    throw std::invalid_argument("psnr: dimension mismatch");
  double se = 0.0;
  for (size_t i = 0; i < reference.data.size(); ++i) {
    double d = reference.data[i] - candidate.data[i];
    se += d * d;
  }
  if (se == 0.0) return std::numeric_limits<double>::infinity();
  double mse = se / static_cast<double>(reference.data.size());
  return 10.0 * std::log10(1.0 / mse);
}

namespace detail {

inline int pnm_token(std::istream& in) {
  // skips whitespace and '#' comments, then reads one nonnegative integer
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (!std::isspace(c)) {
      break;
    }
    c = in.get();
  }
  if (c == EOF || !std::isdigit(c)) throw std::runtime_error("malformed PNM header");
  int v = 0;
  while (c != EOF && std::isdigit(c)) {
    v = v * 10 + (c - '0');
    c = in.get();
  }
  return v;
}

inline Image load_pgm(std::istream& in) {
  char m0 = static_cast<char>(in.get());
  char m1 = static_cast<char>(in.get());
  if (m0 != 'P' || m1 != '5') throw std::runtime_error("not a binary PGM (P5) file");
  int w = pnm_token(in);
  int h = pnm_token(in);
  int maxval = pnm_token(in);
  if (w <= 0 || h <= 0) throw std::runtime_error("bad PGM dimensions");
  if (maxval != 255 && maxval != 65535)
    throw std::runtime_error("unsupported PGM maxval (expected 255 or 65535)");
  Image img(w, h);
  size_t n = static_cast<size_t>(w) * h;
  if (maxval == 255) {
    std::vector<uint8_t> buf(n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
    if (!in) throw std::runtime_error("truncated PGM pixel data");
    for (size_t i = 0; i < n; ++i) img.data[i] = buf[i] / 255.0;
  } else {
    std::vector<uint8_t> buf(2 * n);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
    if (!in) throw std::runtime_error("truncated PGM pixel data");
    for (size_t i = 0; i < n; ++i) {
      // 16-bit PGM samples are big-endian
      unsigned v = (static_cast<unsigned>(buf[2 * i]) << 8) | buf[2 * i + 1];
      img.data[i] = v / 65535.0;
    }
  }
  return img;
}

inline Image load_png(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw std::runtime_error("cannot open file: " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    if (png) png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("libpng init failure");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("failed to decode PNG: " + path);
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  png_uint_32 w = png_get_image_width(png, info);
  png_uint_32 h = png_get_image_height(png, info);
  int color = png_get_color_type(png, info);
  int depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw std::runtime_error("PNG is not grayscale (color input is rejected): " + path);
  }
  if (depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  png_read_update_info(png, info);
  depth = png_get_bit_depth(png, info);
  double scale = depth == 16 ? 65535.0 : 255.0;
  std::vector<uint8_t> row(png_get_rowbytes(png, info));
  Image img(static_cast<int>(w), static_cast<int>(h));
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x) {
      unsigned v = depth == 16 ? (static_cast<unsigned>(row[2 * x]) << 8) | row[2 * x + 1]
                               : row[x];
      img.at(static_cast<int>(y), static_cast<int>(x)) = v / scale;
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);
  return img;
}

}  // namespace detail

/// Loads an 8/16-bit binary PGM or a grayscale PNG, scaled to [0,1].
inline Image load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  unsigned char sig[2] = {0, 0};
  in.read(reinterpret_cast<char*>(sig), 2);
  in.seekg(0);
  if (sig[0] == 'P' && sig[1] == '5') return detail::load_pgm(in);
  if (sig[0] == 0x89 && sig[1] == 'P') return detail::load_png(path);
  if (sig[0] == 'P' && (sig[1] == '6' || sig[1] == '3'))
    throw std::runtime_error("color PNM input is rejected: " + path);
  throw std::runtime_error("unsupported image format: " + path);
}

/// Writes an 8-bit binary PGM; values are clamped to [0,1] and rounded
/// half away from zero.
inline void save_image(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<uint8_t> buf(img.data.size());
  for (size_t i = 0; i < img.data.size(); ++i) {
    double v = img.data[i];
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    buf[i] = static_cast<uint8_t>(std::floor(v * 255.0 + 0.5));
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace wim

#endif  // WIM_IMAGE_HPP
