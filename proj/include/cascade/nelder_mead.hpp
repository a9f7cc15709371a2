#pragma once

// Nelder-Mead downhill simplex for small fixed dimension.
// Standard coefficients (reflection 1, expansion 2, contraction 1/2, shrink 1/2).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace cascade {

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x{};
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool converged = false;
};

struct SimplexOptions {
  double f_tol = 1e-10;  // spread of vertex values
  double x_tol = 1e-10;  // max vertex distance from best, per coordinate
  int max_evaluations = 10000;
};

template <std::size_t N, typename F>
SimplexResult<N> nelder_mead(F&& f, const std::array<double, N>& start, const std::array<double, N>& step,
                             const SimplexOptions& opt = {}) {
  using Point = std::array<double, N>;
  std::array<Point, N + 1> pts;
  std::array<double, N + 1> val;
  int evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    const double v = f(p);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  pts[0] = start;
  val[0] = eval(start);
  for (std::size_t k = 0; k < N; ++k) {
    pts[k + 1] = start;
    pts[k + 1][k] += step[k];
    val[k + 1] = eval(pts[k + 1]);
  }

  std::array<std::size_t, N + 1> order;
  for (std::size_t k = 0; k <= N; ++k) order[k] = k;

  auto along = [](const Point& c, const Point& w, double t) {
    Point r;
    for (std::size_t k = 0; k < N; ++k) r[k] = c[k] + t * (w[k] - c[k]);
    return r;
  };

  bool converged = false;
  while (evals < opt.max_evaluations) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order[0], worst = order[N], second = order[N - 1];

    double size = 0.0;
    for (std::size_t k = 1; k <= N; ++k)
      for (std::size_t d = 0; d < N; ++d) size = std::max(size, std::abs(pts[order[k]][d] - pts[best][d]));
    if (std::isfinite(val[worst]) && val[worst] - val[best] <= opt.f_tol && size <= opt.x_tol) {
      converged = true;
      break;
    }
    if (std::isfinite(val[best]) && std::isfinite(val[worst]) && val[worst] - val[best] <= opt.f_tol * 1e-3) {
      converged = true;
      break;
    }

    Point centroid{};
    for (std::size_t k = 0; k < N; ++k) {
      const std::size_t idx = order[k];
      for (std::size_t d = 0; d < N; ++d) centroid[d] += pts[idx][d] / static_cast<double>(N);
    }

    const Point xr = along(centroid, pts[worst], -1.0);
    const double fr = eval(xr);
    if (fr < val[best]) {
      const Point xe = along(centroid, pts[worst], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const Point xc = along(centroid, pts[worst], outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = xc;
      val[worst] = fc;
      continue;
    }
    for (std::size_t k = 1; k <= N; ++k) {
      const std::size_t idx = order[k];
      pts[idx] = along(pts[best], pts[idx], 0.5);
      val[idx] = eval(pts[idx]);
    }
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k <= N; ++k)
    if (val[k] < val[best]) best = k;
  return {pts[best], val[best], evals, converged};
}

}  // namespace cascade
