#ifndef WIM_TV_HPP
#define WIM_TV_HPP

#include <cmath>
#include <stdexcept>

#include "wim/image.hpp"

namespace wim {

/// Termination contract for an inner proximity solve. With tighten set,
/// the driving solver divides tol by k^2 at outer iteration k, emulating
/// a summable inexactness schedule.
struct ProxConfig {
  double tol = 1e-5;
  int max_iters = 50;
  bool tighten = false;
};

/// Discrete 2D vector field (dual variable / gradient image).
struct VectorField {
  Image x, y;

  VectorField() = default;
  VectorField(int w, int h) : x(w, h), y(w, h) {}
};

/// Forward differences with Neumann boundary (last row/column zero).
inline VectorField grad(const Image& u) {
  VectorField g(u.width, u.height);
  for (int i = 0; i < u.height; ++i) {
    for (int j = 0; j < u.width; ++j) {
      g.x.at(i, j) = j + 1 < u.width ? u.at(i, j + 1) - u.at(i, j) : 0.0;
      g.y.at(i, j) = i + 1 < u.height ? u.at(i + 1, j) - u.at(i, j) : 0.0;
    }
  }
  return g;
}

/// Negative adjoint of grad: backward differences with the matching
/// boundary convention, so that <grad u, p> = -<u, div p> exactly.
inline Image div(const VectorField& p) {
  int w = p.x.width, h = p.x.height;
  Image d(w, h);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      double dx = 0.0, dy = 0.0;
      if (j == 0)
        dx = p.x.at(i, 0);
      else if (j == w - 1)
        dx = -p.x.at(i, w - 2);
      else
        dx = p.x.at(i, j) - p.x.at(i, j - 1);
      if (i == 0)
        dy = p.y.at(0, j);
      else if (i == h - 1)
        dy = -p.y.at(h - 2, j);
      else
        dy = p.y.at(i, j) - p.y.at(i - 1, j);
      d.at(i, j) = dx + dy;
    }
  }
  return d;
}

/// Isotropic discrete total variation.
inline double tv_norm(const Image& u) {
  VectorField g = grad(u);
  double s = 0.0;
  for (size_t i = 0; i < g.x.data.size(); ++i)
    s += std::sqrt(g.x.data[i] * g.x.data[i] + g.y.data[i] * g.y.data[i]);
  return s;
}

/// Approximate minimizer of (1/2)||f - g||^2 + weight * TV(f) by
/// Chambolle's projected fixed-point scheme on the dual variable.
/// The returned image is f = g - weight * div(p). If fp_residual is
/// non-null it receives the terminal max-norm dual update.
inline Image tv_prox(const Image& g, double weight, const ProxConfig& inner,
                     double* fp_residual = nullptr) {
  if (!(weight > 0.0)) throw std::invalid_argument("tv_prox: weight must be positive");
  const double tau = 0.248;
  int w = g.width, h = g.height;
  VectorField p(w, h);
  Image v(w, h);
  double res = 0.0;
  for (int it = 0; it < inner.max_iters; ++it) {
    // v = div(p) - g/weight, then eta = grad(v)
    Image dp = div(p);
    for (size_t i = 0; i < v.data.size(); ++i)
      v.data[i] = dp.data[i] - g.data[i] / weight;
    VectorField eta = grad(v);
    res = 0.0;
    for (size_t i = 0; i < eta.x.data.size(); ++i) {
      double ex = eta.x.data[i], ey = eta.y.data[i];
      double denom = 1.0 + tau * std::sqrt(ex * ex + ey * ey);
      double nx = (p.x.data[i] + tau * ex) / denom;
      double ny = (p.y.data[i] + tau * ey) / denom;
      res = std::max({res, std::abs(nx - p.x.data[i]), std::abs(ny - p.y.data[i])});
      p.x.data[i] = nx;
      p.y.data[i] = ny;
    }
    if (res < inner.tol) break;
  }
  if (fp_residual) *fp_residual = res;
  Image dp = div(p);
  Image f(w, h);
  for (size_t i = 0; i < f.data.size(); ++i)
    f.data[i] = g.data[i] - weight * dp.data[i];
  return f;
}

/// Objective (1/2)||f - g||^2 + weight * TV(f); handy for tests and traces.
inline double tv_objective(const Image& f, const Image& g, double weight) {
  double s = 0.0;
  for (size_t i = 0; i < f.data.size(); ++i) {
    double d = f.data[i] - g.data[i];
    s += 0.5 * d * d;
  }
  return s + weight * tv_norm(f);
}

}  // namespace wim

#endif  // WIM_TV_HPP
