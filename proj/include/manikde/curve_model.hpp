#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "manikde/gbeta.hpp"
#include "manikde/ground_truth.hpp"
#include "manikde/numeric.hpp"
#include "manikde/point_cloud.hpp"
#include "manikde/quadrature.hpp"
#include "manikde/rng.hpp"

namespace manikde {

// Wrap a periodic parameter into [-1/2, 1/2].
inline double wrap_unit(double v) {
  double w = v - std::floor(v + 0.5);
  if (w < -0.5) w += 1.0;
  if (w > 0.5) w -= 1.0;
  return w;
}

// Closed curve in the first two ambient coordinates,
//   Phi(v) = (cos 2piv + a cos 2piwv, sin 2piv + a sin 2piwv),
// carrying the distribution of V ~ lambda * g_beta(lambda * .) pushed
// through Phi. a*w < 1 keeps Phi an embedding. lambda = 1 is the plain
// model; larger lambda concentrates the mass around v = 0 without touching
// the manifold, which lifts the density scale at the query point.
struct CurveModel {
  double a = 0.125;
  int w = 6;
  int beta = 2;
  int D = 2;
  double lambda = 1.0;

  void validate() const {
    if (a * w >= 1.0) throw std::invalid_argument("CurveModel: requires a*w < 1");
    if (beta < 1) throw std::invalid_argument("CurveModel: requires beta >= 1");
    if (D < 2) throw std::invalid_argument("CurveModel: requires D >= 2");
    if (lambda < 1.0) throw std::invalid_argument("CurveModel: requires lambda >= 1");
  }

  void embed(double v, double* out) const {
    const double t = 2.0 * M_PI * v;
    const double wt = 2.0 * M_PI * w * v;
    out[0] = std::cos(t) + a * std::cos(wt);
    out[1] = std::sin(t) + a * std::sin(wt);
    for (int k = 2; k < D; ++k) out[k] = 0.0;
  }

  std::vector<double> embed(double v) const {
    std::vector<double> p(D);
    embed(v, p.data());
    return p;
  }

  std::vector<double> query_point() const { return embed(0.0); }

  // |Phi'(v)| = 2pi sqrt(1 + a^2 w^2 + 2 a w cos(2pi (w-1) v)).
  double speed(double v) const {
    const double aw = a * w;
    return 2.0 * M_PI *
           std::sqrt(1.0 + aw * aw + 2.0 * aw * std::cos(2.0 * M_PI * (w - 1) * v));
  }

  // Parameter density of V (the lambda-scaled marginal), 0 outside its
  // support [-1/(2 lambda), 1/(2 lambda)].
  double param_density(double v) const {
    const double lv = lambda * v;
    if (lv < -0.5 || lv > 0.5) return 0.0;
    return lambda * gbeta_pdf(lv, beta);
  }

  // Density of the pushed-forward distribution w.r.t. arc length on the
  // image curve, at the point Phi(v).
  double density_at(double v) const {
    const double vw = wrap_unit(v);
    return param_density(vw) / speed(vw);
  }

  double total_length() const {
    return integrate([this](double v) { return speed(v); }, -0.5, 0.5, 1e-12);
  }

  // Signed arc length from v = 0, for v in [-1/2, 1/2].
  double arc_from_zero(double v) const {
    if (v == 0.0) return 0.0;
    return integrate([this](double t) { return speed(t); }, 0.0, v, 1e-12, 1e-14);
  }

  // Shortest-path distance on the image curve between Phi(v1) and Phi(v2).
  double geodesic(double v1, double v2) const {
    const double s1 = arc_from_zero(wrap_unit(v1));
    const double s2 = arc_from_zero(wrap_unit(v2));
    const double L = total_length();
    const double gap = std::abs(s1 - s2);
    return std::min(gap, L - gap);
  }

  // One parameter draw per point, inverse-CDF, fixed order; bitwise
  // reproducible for a given seed.
  std::vector<double> sample_params(std::size_t n, std::uint64_t seed) const {
    validate();
    Rng rng(seed);
    std::vector<double> vs(n);
    for (std::size_t i = 0; i < n; ++i) {
      vs[i] = gbeta_sample(rng, beta) / lambda;
    }
    return vs;
  }

  PointCloud sample(std::size_t n, std::uint64_t seed) const {
    const std::vector<double> vs = sample_params(n, seed);
    PointCloud cloud;
    cloud.dim = D;
    cloud.x = query_point();
    cloud.coords.resize(n * static_cast<std::size_t>(D));
    for (std::size_t i = 0; i < n; ++i) {
      embed(vs[i], cloud.coords.data() + i * static_cast<std::size_t>(D));
    }
    return cloud;
  }

  // Reach lower bound from a dense parameter grid: the point-tangent bound
  //   tau <= |q - p|^2 / (2 dist(q - p, T_p)),
  // whose grid infimum recovers both the smallest curvature radius (close
  // pairs) and half the bottleneck distance (far pairs) in one formula.
  double estimate_reach(int grid = 4096) const {
    std::vector<double> px(grid), py(grid), tx(grid), ty(grid);
    for (int i = 0; i < grid; ++i) {
      const double v = -0.5 + static_cast<double>(i) / grid;
      const double t = 2.0 * M_PI * v;
      const double wt = 2.0 * M_PI * w * v;
      px[i] = std::cos(t) + a * std::cos(wt);
      py[i] = std::sin(t) + a * std::sin(wt);
      double dx = -std::sin(t) - a * w * std::sin(wt);
      double dy = std::cos(t) + a * w * std::cos(wt);
      const double nrm = std::sqrt(dx * dx + dy * dy);
      tx[i] = dx / nrm;
      ty[i] = dy / nrm;
    }
    double tau = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
      for (int j = i + 1; j < grid; ++j) {
        const double dx = px[j] - px[i];
        const double dy = py[j] - py[i];
        const double d2 = dx * dx + dy * dy;
        // Perpendicular distance of q - p to the tangent line at p (2-D cross).
        const double perp = std::abs(dx * ty[i] - dy * tx[i]);
        if (perp > 1e-15) tau = std::min(tau, d2 / (2.0 * perp));
        const double perp_j = std::abs(dx * ty[j] - dy * tx[j]);
        if (perp_j > 1e-15) tau = std::min(tau, d2 / (2.0 * perp_j));
      }
    }
    return tau;
  }

  GroundTruth ground_truth() const {
    GroundTruth gt;
    gt.d = 1;
    gt.f_at_x = density_at(0.0);
    gt.f_min = 0.0;  // parameter density vanishes at the support edge
    gt.f_max = max_density();
    gt.tau = cached_reach();
    return gt;
  }

 private:
  double max_density() const {
    // Dense scan over the support of the scaled marginal, then local
    // golden-section refinement around the best grid point.
    const double half = 0.5 / lambda;
    constexpr int kGrid = 8192;
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= kGrid; ++i) {
      const double v = -half + 2.0 * half * i / kGrid;
      const double f = density_at(v);
      if (f > best) {
        best = f;
        best_i = i;
      }
    }
    double lo = -half + 2.0 * half * std::max(0, best_i - 1) / kGrid;
    double hi = -half + 2.0 * half * std::min(kGrid, best_i + 1) / kGrid;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double p = hi - inv_phi * (hi - lo);
    double q = lo + inv_phi * (hi - lo);
    double fp = density_at(p), fq = density_at(q);
    while (hi - lo > 1e-12) {
      if (fp < fq) {
        lo = p;
        p = q;
        fp = fq;
        q = lo + inv_phi * (hi - lo);
        fq = density_at(q);
      } else {
        hi = q;
        q = p;
        fq = fp;
        p = hi - inv_phi * (hi - lo);
        fp = density_at(p);
      }
    }
    return std::max({best, fp, fq});
  }

  double cached_reach() const {
    // The reach depends only on (a, w); memoize per parameter pair.
    static std::mutex mu;
    static std::map<std::pair<double, int>, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    const std::pair<double, int> key{a, w};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double tau = estimate_reach();
    cache.emplace(key, tau);
    return tau;
  }
};

}  // namespace manikde
