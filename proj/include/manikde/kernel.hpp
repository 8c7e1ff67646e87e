#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "manikde/numeric.hpp"
#include "manikde/quadrature.hpp"

namespace manikde {

// Smooth bump, radial profile: exp(-1/(1 - r^2)) inside the unit ball,
// identically 0 outside. C-infinity everywhere including the boundary.
inline double bump_radial(double r) {
  const double s = 1.0 - r * r;
  if (s <= 0.0) return 0.0;
  return std::exp(-1.0 / s);
}

inline double bump(const double* z, int dim) {
  double n2 = 0.0;
  for (int k = 0; k < dim; ++k) n2 += z[k] * z[k];
  if (n2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - n2));
}

// Normalization of the base bump over a d-dimensional subspace:
// lambda_d = S_{d-1} * int_0^1 r^{d-1} exp(-1/(1-r^2)) dr.
// Adaptive quadrature at 1e-10 relative tolerance, cached per d.
inline double compute_lambda_d(int d) {
  if (d < 1) throw std::domain_error("compute_lambda_d: d must be >= 1");
  static std::mutex mu;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  const double radial = integrate(
      [d](double r) {
        return std::pow(r, static_cast<double>(d - 1)) * bump_radial(r);
      },
      0.0, 1.0, 1e-10);
  const double value = sphere_surface_area(d) * radial;
  cache.emplace(d, value);
  return value;
}

// One signed, scaled copy of the base bump. The order-ell kernel is a sum
// of 2^(ell-1) such terms; see unroll_kernel_terms.
struct KernelTerm {
  double coef;
  double scale;
};

// Unrolls the order recursion
//   K_{l+1}(z) = 2^(1+d/l) * K_l(2^(1/l) z) - K_l(z),   K_1 = bump / lambda_d
// into coefficient/scale pairs, so evaluation needs no recursion.
inline std::vector<KernelTerm> unroll_kernel_terms(int d, int ell) {
  if (d < 1 || ell < 1) throw std::domain_error("unroll_kernel_terms: d, ell must be >= 1");
  std::vector<KernelTerm> terms{{1.0, 1.0}};
  for (int l = 1; l < ell; ++l) {
    const double coef_factor = std::pow(2.0, 1.0 + static_cast<double>(d) / l);
    const double scale_factor = std::pow(2.0, 1.0 / l);
    std::vector<KernelTerm> next;
    next.reserve(2 * terms.size());
    for (const KernelTerm& t : terms) {
      next.push_back({coef_factor * t.coef, scale_factor * t.scale});
    }
    for (const KernelTerm& t : terms) {
      next.push_back({-t.coef, t.scale});
    }
    terms = std::move(next);
  }
  return terms;
}

// Compactly supported kernel of subspace dimension d and order ell.
// Radial, supported on the closed unit ball, integrates to 1 over any
// d-dimensional subspace, signed for ell >= 2.
class Kernel {
 public:
  static constexpr double support_radius = 1.0;

  Kernel(int d, int ell)
      : d_(d),
        ell_(ell),
        terms_(unroll_kernel_terms(d, ell)),
        lambda_d_(compute_lambda_d(d)) {
    sup_norm_ = find_sup_norm();
  }

  int dim() const { return d_; }
  int order() const { return ell_; }
  double lambda_d() const { return lambda_d_; }
  double sup_norm() const { return sup_norm_; }
  const std::vector<KernelTerm>& terms() const { return terms_; }

  // Signed value at radius r; 0 for r >= 1. Every term's support sits
  // inside the unit ball because all scales are >= 1.
  double eval_radial(double r) const {
    if (r >= 1.0) return 0.0;
    double s = 0.0;
    for (const KernelTerm& t : terms_) {
      s += t.coef * bump_radial(t.scale * r);
    }
    return s / lambda_d_;
  }

  double eval(const double* z, int dim) const {
    double n2 = 0.0;
    for (int k = 0; k < dim; ++k) n2 += z[k] * z[k];
    return eval_radial(std::sqrt(n2));
  }

  double eval(const std::vector<double>& z) const {
    return eval(z.data(), static_cast<int>(z.size()));
  }

 private:
  // Dense radial scan (10^4 points) locates the global maximum of |K|,
  // then golden-section refinement tightens the bracket to 1e-10.
  double find_sup_norm() const {
    constexpr int kGrid = 10000;
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i <= kGrid; ++i) {
      const double r = static_cast<double>(i) / kGrid;
      const double v = std::abs(eval_radial(r));
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    double lo = std::max(0.0, static_cast<double>(best_i - 1) / kGrid);
    double hi = std::min(1.0, static_cast<double>(best_i + 1) / kGrid);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = std::abs(eval_radial(a));
    double fb = std::abs(eval_radial(b));
    while (hi - lo > 1e-10) {
      if (fa < fb) {
        lo = a;
        a = b;
        fa = fb;
        b = lo + inv_phi * (hi - lo);
        fb = std::abs(eval_radial(b));
      } else {
        hi = b;
        b = a;
        fb = fa;
        a = hi - inv_phi * (hi - lo);
        fa = std::abs(eval_radial(a));
      }
    }
    return std::max({best, fa, fb});
  }

  int d_;
  int ell_;
  std::vector<KernelTerm> terms_;
  double lambda_d_;
  double sup_norm_;
};

}  // namespace manikde
