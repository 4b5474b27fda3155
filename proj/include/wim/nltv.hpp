#ifndef WIM_NLTV_HPP
#define WIM_NLTV_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "wim/image.hpp"
#include "wim/tv.hpp"

namespace wim {

struct NlParams {
  int patch_size = 5;
  int window_size = 15;
  int m_best = 10;
  int n_nearest = 4;       // axis-adjacent safeguard neighbors
  double patch_sigma = 1.25;
  double h = 0.0;          // 0 -> adaptive: 0.4 * std of patch distances
};

/// Symmetric semi-local weight graph in CSR form. rev[e] is the index of
/// the reverse directed edge, so q(y,x) lookups are O(1).
struct NlWeightGraph {
  int width = 0;
  int height = 0;
  NlParams params;
  double h_used = 0.0;
  std::vector<int> offset;  // size n+1
  std::vector<int> nbr;
  std::vector<double> w;
  std::vector<int> rev;

  int pixels() const { return width * height; }
  int edges() const { return static_cast<int>(nbr.size()); }
  int degree(int p) const { return offset[p + 1] - offset[p]; }
};

/// Edge-indexed scalar field: one value per directed edge of a graph.
using NlField = std::vector<double>;

namespace nldetail {

inline double sym_ext(const Image& img, int y, int x) {
  while (y < 0 || y >= img.height) y = y < 0 ? -y : 2 * (img.height - 1) - y;
  while (x < 0 || x >= img.width) x = x < 0 ? -x : 2 * (img.width - 1) - x;
  return img.at(y, x);
}

inline std::vector<double> patch_kernel(int patch, double sigma) {
  int r = patch / 2;
  std::vector<double> k(static_cast<size_t>(patch) * patch);
  double sum = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      double v = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
      k[static_cast<size_t>(dy + r) * patch + (dx + r)] = v;
      sum += v;
    }
  for (double& v : k) v /= sum;
  return k;
}

/// Kernel-weighted squared patch distance with symmetric border extension.
inline double patch_dist2(const Image& img, int ay, int ax, int by, int bx,
                          const std::vector<double>& kernel, int patch) {
  int r = patch / 2;
  double s = 0.0;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      double d = sym_ext(img, ay + dy, ax + dx) - sym_ext(img, by + dy, bx + dx);
      s += kernel[static_cast<size_t>(dy + r) * patch + (dx + r)] * d * d;
    }
  return s;
}

}  // namespace nldetail

/// Builds the semi-local weight graph from a guide image: for every pixel,
/// the m_best lowest-patch-distance candidates in the search window plus
/// the axis-adjacent pixels, with weights exp(-d^2/h^2), symmetrized by
/// union (the patch distance itself is symmetric).
inline NlWeightGraph build_weights(const Image& guide, const NlParams& params = {}) {
  if (guide.width < params.window_size || guide.height < params.window_size)
    throw std::invalid_argument("build_weights: image smaller than search window");
  const int n = guide.width * guide.height;
  const int wr = params.window_size / 2;
  const std::vector<double> kernel =
      nldetail::patch_kernel(params.patch_size, params.patch_sigma);

  // pass 1: per-pixel candidate selection + distance statistics for h
  struct Cand {
    double d2;
    int scan;  // window scan position, the deterministic tie-breaker
    int idx;
  };
  std::vector<std::vector<Cand>> selected(static_cast<size_t>(n));
  double dist_sum = 0.0, dist_sq_sum = 0.0;
  long dist_count = 0;
  for (int y = 0; y < guide.height; ++y) {
    for (int x = 0; x < guide.width; ++x) {
      int p = y * guide.width + x;
      std::vector<Cand> best;
      best.reserve(static_cast<size_t>(params.m_best) + 1);
      int scan = 0;
      for (int dy = -wr; dy <= wr; ++dy) {
        for (int dx = -wr; dx <= wr; ++dx, ++scan) {
          int ny = y + dy, nx = x + dx;
          if ((dy == 0 && dx == 0) || ny < 0 || ny >= guide.height || nx < 0 ||
              nx >= guide.width)
            continue;
          double d2 = nldetail::patch_dist2(guide, y, x, ny, nx, kernel,
                                            params.patch_size);
          double d = std::sqrt(d2);
          dist_sum += d;
          dist_sq_sum += d * d;
          ++dist_count;
          Cand c{d2, scan, ny * guide.width + nx};
          auto cmp = [](const Cand& a, const Cand& b) {
            return a.d2 < b.d2 || (a.d2 == b.d2 && a.scan < b.scan);
          };
          if (static_cast<int>(best.size()) < params.m_best) {
            best.push_back(c);
            std::push_heap(best.begin(), best.end(), cmp);
          } else if (cmp(c, best.front())) {
            std::pop_heap(best.begin(), best.end(), cmp);
            best.back() = c;
            std::push_heap(best.begin(), best.end(), cmp);
          }
        }
      }
      // axis-adjacent safeguard neighbors
      const int ady[4] = {-1, 1, 0, 0};
      const int adx[4] = {0, 0, -1, 1};
      for (int k = 0; k < std::min(params.n_nearest, 4); ++k) {
        int ny = y + ady[k], nx = x + adx[k];
        if (ny < 0 || ny >= guide.height || nx < 0 || nx >= guide.width) continue;
        int idx = ny * guide.width + nx;
        bool dup = false;
        for (const Cand& c : best)
          if (c.idx == idx) dup = true;
        if (!dup)
          best.push_back({nldetail::patch_dist2(guide, y, x, ny, nx, kernel,
                                                params.patch_size),
                          0, idx});
      }
      selected[static_cast<size_t>(p)] = std::move(best);
    }
  }

  double h = params.h;
  if (h <= 0.0) {
    double mean = dist_sum / static_cast<double>(dist_count);
    double var = dist_sq_sum / static_cast<double>(dist_count) - mean * mean;
    h = 0.4 * std::sqrt(std::max(var, 0.0));
    if (h <= 0.0) h = 1.0;  // constant guide: all distances zero
  }

  // pass 2: symmetrize via an undirected edge map (max-weight merge; the
  // distance is symmetric so duplicates agree anyway)
  std::map<std::pair<int, int>, double> edge_w;
  for (int p = 0; p < n; ++p) {
    for (const Cand& c : selected[static_cast<size_t>(p)]) {
      double weight = std::exp(-c.d2 / (h * h));
      auto key = std::minmax(p, c.idx);
      auto [it, inserted] = edge_w.try_emplace({key.first, key.second}, weight);
      if (!inserted && weight > it->second) it->second = weight;
    }
  }

  NlWeightGraph gph;
  gph.width = guide.width;
  gph.height = guide.height;
  gph.params = params;
  gph.h_used = h;
  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<size_t>(n));
  for (const auto& [key, weight] : edge_w) {
    adj[static_cast<size_t>(key.first)].emplace_back(key.second, weight);
    adj[static_cast<size_t>(key.second)].emplace_back(key.first, weight);
  }
  gph.offset.assign(static_cast<size_t>(n) + 1, 0);
  for (int p = 0; p < n; ++p) {
    std::sort(adj[static_cast<size_t>(p)].begin(), adj[static_cast<size_t>(p)].end());
    gph.offset[static_cast<size_t>(p) + 1] =
        gph.offset[static_cast<size_t>(p)] +
        static_cast<int>(adj[static_cast<size_t>(p)].size());
  }
  gph.nbr.resize(static_cast<size_t>(gph.offset.back()));
  gph.w.resize(gph.nbr.size());
  gph.rev.assign(gph.nbr.size(), -1);
  for (int p = 0; p < n; ++p) {
    int e = gph.offset[static_cast<size_t>(p)];
    for (const auto& [q, weight] : adj[static_cast<size_t>(p)]) {
      gph.nbr[static_cast<size_t>(e)] = q;
      gph.w[static_cast<size_t>(e)] = weight;
      ++e;
    }
  }
  for (int p = 0; p < n; ++p) {
    for (int e = gph.offset[static_cast<size_t>(p)];
         e < gph.offset[static_cast<size_t>(p) + 1]; ++e) {
      int q = gph.nbr[static_cast<size_t>(e)];
      // adjacency lists are sorted by neighbor index
      int lo = gph.offset[static_cast<size_t>(q)];
      int hi = gph.offset[static_cast<size_t>(q) + 1];
      auto it = std::lower_bound(gph.nbr.begin() + lo, gph.nbr.begin() + hi, p);
      gph.rev[static_cast<size_t>(e)] = static_cast<int>(it - gph.nbr.begin());
    }
  }
  return gph;
}

/// Weighted graph gradient: entry (x,y) = (u(y) - u(x)) * sqrt(w(x,y)).
inline NlField nl_grad(const Image& u, const NlWeightGraph& gph) {
  if (u.width != gph.width || u.height != gph.height)
    throw std::invalid_argument("nl_grad: dimension mismatch");
  NlField q(gph.nbr.size());
  for (int p = 0; p < gph.pixels(); ++p) {
    double up = u.data[static_cast<size_t>(p)];
    for (int e = gph.offset[static_cast<size_t>(p)];
         e < gph.offset[static_cast<size_t>(p) + 1]; ++e)
      q[static_cast<size_t>(e)] =
          (u.data[static_cast<size_t>(gph.nbr[static_cast<size_t>(e)])] - up) *
          std::sqrt(gph.w[static_cast<size_t>(e)]);
  }
  return q;
}

/// Negative adjoint of nl_grad:
/// (div q)(x) = sum_y sqrt(w(x,y)) * (q(x,y) - q(y,x)).
inline Image nl_div(const NlField& q, const NlWeightGraph& gph) {
  if (q.size() != gph.nbr.size())
    throw std::invalid_argument("nl_div: field/graph index mismatch");
  Image d(gph.width, gph.height);
  for (int p = 0; p < gph.pixels(); ++p) {
    double s = 0.0;
    for (int e = gph.offset[static_cast<size_t>(p)];
         e < gph.offset[static_cast<size_t>(p) + 1]; ++e)
      s += std::sqrt(gph.w[static_cast<size_t>(e)]) *
           (q[static_cast<size_t>(e)] - q[static_cast<size_t>(gph.rev[static_cast<size_t>(e)])]);
    d.data[static_cast<size_t>(p)] = s;
  }
  return d;
}

/// Non-local TV norm: sum_x sqrt( sum_y (u(y)-u(x))^2 w(x,y) ).
inline double nltv_norm(const Image& u, const NlWeightGraph& gph) {
  if (u.width != gph.width || u.height != gph.height)
    throw std::invalid_argument("nltv_norm: dimension mismatch");
  double s = 0.0;
  for (int p = 0; p < gph.pixels(); ++p) {
    double g2 = 0.0;
    double up = u.data[static_cast<size_t>(p)];
    for (int e = gph.offset[static_cast<size_t>(p)];
         e < gph.offset[static_cast<size_t>(p) + 1]; ++e) {
      double d = u.data[static_cast<size_t>(gph.nbr[static_cast<size_t>(e)])] - up;
      g2 += d * d * gph.w[static_cast<size_t>(e)];
    }
    s += std::sqrt(g2);
  }
  return s;
}

namespace nldetail {

/// y += (I + rho * L) x with L the graph Laplacian -nl_div(nl_grad(.)).
inline void apply_system(const NlWeightGraph& gph, double rho,
                         const std::vector<double>& x, std::vector<double>& y) {
  for (int p = 0; p < gph.pixels(); ++p) {
    double acc = 0.0;
    double xp = x[static_cast<size_t>(p)];
    for (int e = gph.offset[static_cast<size_t>(p)];
         e < gph.offset[static_cast<size_t>(p) + 1]; ++e)
      acc += gph.w[static_cast<size_t>(e)] *
             (xp - x[static_cast<size_t>(gph.nbr[static_cast<size_t>(e)])]);
    y[static_cast<size_t>(p)] = xp + rho * 2.0 * acc;
  }
}

/// Conjugate gradient on the SPD system (I + rho L) f = rhs, warm-started
/// from f's current contents.
inline void solve_system(const NlWeightGraph& gph, double rho,
                         const std::vector<double>& rhs, std::vector<double>& f,
                         double rel_tol, int max_iters) {
  size_t n = rhs.size();
  std::vector<double> r(n), p(n), ap(n);
  apply_system(gph, rho, f, ap);
  double rhs_norm2 = 0.0, rr = 0.0;
  for (size_t i = 0; i < n; ++i) {
    r[i] = rhs[i] - ap[i];
    rhs_norm2 += rhs[i] * rhs[i];
    rr += r[i] * r[i];
  }
  if (rhs_norm2 == 0.0) rhs_norm2 = 1.0;
  double stop = rel_tol * rel_tol * rhs_norm2;
  p = r;
  for (int it = 0; it < max_iters && rr > stop; ++it) {
    apply_system(gph, rho, p, ap);
    double pap = 0.0;
    for (size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
    double alpha = rr / pap;
    double rr_new = 0.0;
    for (size_t i = 0; i < n; ++i) {
      f[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
      rr_new += r[i] * r[i];
    }
    double beta = rr_new / rr;
    rr = rr_new;
    for (size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }
}

}  // namespace nldetail

/// Approximate minimizer of (1/2)||f - g||^2 + weight * NLTV(f) by an inner
/// split-Bregman scheme: linear solve in f (CG), per-pixel group shrinkage
/// of the auxiliary gradient, Bregman update. If fp_residual is non-null it
/// receives the terminal relative iterate change.
inline Image nltv_prox(const Image& g, double weight, const NlWeightGraph& gph,
                       const ProxConfig& inner, double* fp_residual = nullptr) {
  if (!(weight > 0.0)) throw std::invalid_argument("nltv_prox: weight must be positive");
  if (g.width != gph.width || g.height != gph.height)
    throw std::invalid_argument("nltv_prox: dimension mismatch");
  const double rho = 1.0;  // splitting penalty; any positive value converges
  const double shrink = weight / rho;
  size_t n = g.data.size();
  std::vector<double> f = g.data;  // warm start at g
  NlField d(gph.nbr.size(), 0.0), b(gph.nbr.size(), 0.0);
  std::vector<double> rhs(n);
  Image fi(g.width, g.height);
  double res = 0.0;
  for (int it = 0; it < inner.max_iters; ++it) {
    // f-step: (I + rho L) f = g + rho * grad^T (d - b), grad^T = -nl_div
    NlField db(d.size());
    for (size_t e = 0; e < d.size(); ++e) db[e] = d[e] - b[e];
    Image divdb = nl_div(db, gph);
    for (size_t i = 0; i < n; ++i) rhs[i] = g.data[i] - rho * divdb.data[i];
    std::vector<double> f_prev = f;
    nldetail::solve_system(gph, rho, rhs, f, 1e-6, 200);
    // d-step: group shrinkage of grad(f) + b per pixel
    fi.data = f;
    NlField gf = nl_grad(fi, gph);
    for (int p = 0; p < gph.pixels(); ++p) {
      double norm2 = 0.0;
      for (int e = gph.offset[static_cast<size_t>(p)];
           e < gph.offset[static_cast<size_t>(p) + 1]; ++e) {
        double v = gf[static_cast<size_t>(e)] + b[static_cast<size_t>(e)];
        norm2 += v * v;
      }
      double norm = std::sqrt(norm2);
      double scale = norm > shrink ? (norm - shrink) / norm : 0.0;
      for (int e = gph.offset[static_cast<size_t>(p)];
           e < gph.offset[static_cast<size_t>(p) + 1]; ++e) {
        double v = gf[static_cast<size_t>(e)] + b[static_cast<size_t>(e)];
        d[static_cast<size_t>(e)] = scale * v;
        b[static_cast<size_t>(e)] = v - d[static_cast<size_t>(e)];
      }
    }
    double diff2 = 0.0, norm2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double dd = f[i] - f_prev[i];
      diff2 += dd * dd;
      norm2 += f_prev[i] * f_prev[i];
    }
    res = norm2 > 0.0 ? std::sqrt(diff2 / norm2) : std::sqrt(diff2);
    if (it > 0 && res < inner.tol) break;
  }
  if (fp_residual) *fp_residual = res;
  fi.data = std::move(f);
  return fi;
}

/// Objective (1/2)||f - g||^2 + weight * NLTV(f).
inline double nltv_objective(const Image& f, const Image& g, double weight,
                             const NlWeightGraph& gph) {
  double s = 0.0;
  for (size_t i = 0; i < f.data.size(); ++i) {
    double d = f.data[i] - g.data[i];
    s += 0.5 * d * d;
  }
  return s + weight * nltv_norm(f, gph);
}

/// Debug dump: one line per directed edge "x_index y_index weight".
inline void dump_graph(const NlWeightGraph& gph, std::ostream& out) {
  for (int p = 0; p < gph.pixels(); ++p)
    for (int e = gph.offset[static_cast<size_t>(p)];
         e < gph.offset[static_cast<size_t>(p) + 1]; ++e)
      out << p << " " << gph.nbr[static_cast<size_t>(e)] << " "
          << gph.w[static_cast<size_t>(e)] << "\n";
}

}  // namespace wim

#endif  // WIM_NLTV_HPP
