#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "manikde/curve_model.hpp"
#include "manikde/gbeta.hpp"
#include "manikde/ground_truth.hpp"
#include "manikde/point_cloud.hpp"
#include "manikde/rng.hpp"

namespace manikde {

// Perturbed torus of revolution in the first three ambient coordinates:
//   Psi(v,u) = ((b + cos 2piv) cos 2piu + a sin 2piwv,
//               (b + cos 2piv) sin 2piu + a cos 2piwv,
//               sin 2piv + a sin 2piwu).
// Parameters (V, U) are independent lambda-scaled draws of the g_beta
// marginal; the surface density divides by the Gram volume element.
struct TorusModel {
  double a = 0.125;
  double b = 3.0;
  int w = 5;
  int beta = 2;
  double lambda = 1.0;
  int D = 3;

  void validate() const {
    if (!(b > 1.0 + 2.0 * a)) {
      throw std::invalid_argument("TorusModel: requires b > 1 + 2a");
    }
    if (beta < 1) throw std::invalid_argument("TorusModel: requires beta >= 1");
    if (D < 3) throw std::invalid_argument("TorusModel: requires D >= 3");
    if (lambda < 1.0) throw std::invalid_argument("TorusModel: requires lambda >= 1");
  }

  void embed(double v, double u, double* out) const {
    const double tv = 2.0 * M_PI * v;
    const double tu = 2.0 * M_PI * u;
    const double twv = 2.0 * M_PI * w * v;
    const double twu = 2.0 * M_PI * w * u;
    const double ring = b + std::cos(tv);
    out[0] = ring * std::cos(tu) + a * std::sin(twv);
    out[1] = ring * std::sin(tu) + a * std::cos(twv);
    out[2] = std::sin(tv) + a * std::sin(twu);
    for (int k = 3; k < D; ++k) out[k] = 0.0;
  }

  std::vector<double> embed(double v, double u) const {
    std::vector<double> p(D);
    embed(v, u, p.data());
    return p;
  }

  std::vector<double> query_point() const { return embed(0.0, 0.0); }

  // Analytic 3x2 Jacobian of the first three coordinates; columns are
  // d/dv and d/du.
  std::array<std::array<double, 2>, 3> jacobian(double v, double u) const {
    const double tv = 2.0 * M_PI * v;
    const double tu = 2.0 * M_PI * u;
    const double twv = 2.0 * M_PI * w * v;
    const double twu = 2.0 * M_PI * w * u;
    const double ring = b + std::cos(tv);
    const double c = 2.0 * M_PI;
    std::array<std::array<double, 2>, 3> J;
    J[0][0] = c * (-std::sin(tv) * std::cos(tu) + a * w * std::cos(twv));
    J[1][0] = c * (-std::sin(tv) * std::sin(tu) - a * w * std::sin(twv));
    J[2][0] = c * std::cos(tv);
    J[0][1] = c * (-ring * std::sin(tu));
    J[1][1] = c * (ring * std::cos(tu));
    J[2][1] = c * (a * w * std::cos(twu));
    return J;
  }

  // sqrt of the Gram determinant of the Jacobian: the area element the
  // push-forward density divides by.
  double volume_element(double v, double u) const {
    const auto J = jacobian(v, u);
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    for (int r = 0; r < 3; ++r) {
      g11 += J[r][0] * J[r][0];
      g12 += J[r][0] * J[r][1];
      g22 += J[r][1] * J[r][1];
    }
    return std::sqrt(g11 * g22 - g12 * g12);
  }

  // Joint parameter density of (V, U), 0 outside the scaled support square.
  double param_density(double v, double u) const {
    const double lv = lambda * v;
    const double lu = lambda * u;
    if (lv < -0.5 || lv > 0.5 || lu < -0.5 || lu > 0.5) return 0.0;
    return lambda * lambda * gbeta_pdf(lv, beta) * gbeta_pdf(lu, beta);
  }

  // Surface density at Psi(v, u) w.r.t. the 2-D volume measure.
  double density_at(double v, double u) const {
    const double vw = wrap_unit(v);
    const double uw = wrap_unit(u);
    return param_density(vw, uw) / volume_element(vw, uw);
  }

  // Parameter draws in fixed (v, u) order per point.
  std::vector<std::array<double, 2>> sample_params(std::size_t n,
                                                   std::uint64_t seed) const {
    validate();
    Rng rng(seed);
    std::vector<std::array<double, 2>> vu(n);
    for (std::size_t i = 0; i < n; ++i) {
      vu[i][0] = gbeta_sample(rng, beta) / lambda;
      vu[i][1] = gbeta_sample(rng, beta) / lambda;
    }
    return vu;
  }

  PointCloud sample(std::size_t n, std::uint64_t seed) const {
    const auto vu = sample_params(n, seed);
    PointCloud cloud;
    cloud.dim = D;
    cloud.x = query_point();
    cloud.coords.resize(n * static_cast<std::size_t>(D));
    for (std::size_t i = 0; i < n; ++i) {
      embed(vu[i][0], vu[i][1], cloud.coords.data() + i * static_cast<std::size_t>(D));
    }
    return cloud;
  }

  // Point-tangent reach bound on a (grid x grid) parameter lattice; the
  // tangent plane at p is spanned by the orthonormalized Jacobian columns.
  double estimate_reach(int grid = 72) const {
    const int m = grid * grid;
    std::vector<std::array<double, 3>> pts(m);
    std::vector<std::array<double, 3>> t1(m), t2(m);
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        const double v = -0.5 + static_cast<double>(i) / grid;
        const double u = -0.5 + static_cast<double>(j) / grid;
        const int idx = i * grid + j;
        double p[3];
        embed(v, u, p);
        pts[idx] = {p[0], p[1], p[2]};
        const auto J = jacobian(v, u);
        std::array<double, 3> e1{J[0][0], J[1][0], J[2][0]};
        std::array<double, 3> e2{J[0][1], J[1][1], J[2][1]};
        double n1 = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
        for (auto& c : e1) c /= n1;
        double dot = e1[0] * e2[0] + e1[1] * e2[1] + e1[2] * e2[2];
        for (int r = 0; r < 3; ++r) e2[r] -= dot * e1[r];
        double n2 = std::sqrt(e2[0] * e2[0] + e2[1] * e2[1] + e2[2] * e2[2]);
        for (auto& c : e2) c /= n2;
        t1[idx] = e1;
        t2[idx] = e2;
      }
    }
    double tau = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        const double dx = pts[j][0] - pts[i][0];
        const double dy = pts[j][1] - pts[i][1];
        const double dz = pts[j][2] - pts[i][2];
        const double d2 = dx * dx + dy * dy + dz * dz;
        // Project q - p off the tangent planes at both endpoints; the bound
        // is an infimum over ordered pairs.
        const double c1 = dx * t1[i][0] + dy * t1[i][1] + dz * t1[i][2];
        const double c2 = dx * t2[i][0] + dy * t2[i][1] + dz * t2[i][2];
        const double perp2_i = d2 - c1 * c1 - c2 * c2;
        if (perp2_i > 1e-24) {
          tau = std::min(tau, d2 / (2.0 * std::sqrt(perp2_i)));
        }
        const double d1 = dx * t1[j][0] + dy * t1[j][1] + dz * t1[j][2];
        const double e2 = dx * t2[j][0] + dy * t2[j][1] + dz * t2[j][2];
        const double perp2_j = d2 - d1 * d1 - e2 * e2;
        if (perp2_j > 1e-24) {
          tau = std::min(tau, d2 / (2.0 * std::sqrt(perp2_j)));
        }
      }
    }
    return tau;
  }

  GroundTruth ground_truth() const {
    GroundTruth gt;
    gt.d = 2;
    gt.f_at_x = density_at(0.0, 0.0);
    gt.f_min = 0.0;
    gt.f_max = max_density();
    gt.tau = cached_reach();
    return gt;
  }

 private:
  double max_density() const {
    // Coarse scan plus one local grid refinement; the density is smooth on
    // the open support square.
    const double half = 0.5 / lambda;
    constexpr int kGrid = 512;
    double best = 0.0;
    double bv = 0.0, bu = 0.0;
    for (int i = 0; i <= kGrid; ++i) {
      for (int j = 0; j <= kGrid; ++j) {
        const double v = -half + 2.0 * half * i / kGrid;
        const double u = -half + 2.0 * half * j / kGrid;
        const double f = density_at(v, u);
        if (f > best) {
          best = f;
          bv = v;
          bu = u;
        }
      }
    }
    const double step = 2.0 * half / kGrid;
    constexpr int kFine = 256;
    for (int i = -kFine; i <= kFine; ++i) {
      for (int j = -kFine; j <= kFine; ++j) {
        const double v = bv + step * i / kFine;
        const double u = bu + step * j / kFine;
        if (std::abs(v) > half || std::abs(u) > half) continue;
        best = std::max(best, density_at(v, u));
      }
    }
    return best;
  }

  double cached_reach() const {
    static std::mutex mu;
    static std::map<std::tuple<double, double, int>, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    const std::tuple<double, double, int> key{a, b, w};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double tau = estimate_reach();
    cache.emplace(key, tau);
    return tau;
  }
};

}  // namespace manikde
