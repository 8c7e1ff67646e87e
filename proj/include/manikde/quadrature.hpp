#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace manikde {
namespace detail {

// Gauss-Kronrod 15-point rule on [-1, 1]; the embedded 7-point Gauss rule
// supplies the error estimate. Nodes are symmetric, listed for t >= 0.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss-7 weights, aligned with odd-index Kronrod nodes (plus the center).
inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
void gk15(F& f, double a, double b, double& value, double& error) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double t = kGK15Nodes[i];
    // Index 7 is the shared center node; the odd indices are the Gauss-7
    // nodes (center included), so one branch covers both rules.
    const double fs = (i == 7) ? f(c) : f(c - hw * t) + f(c + hw * t);
    kron += kGK15Weights[i] * fs;
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * fs;
  }
  value = kron * hw;
  error = std::abs((kron - gauss) * hw);
}

}  // namespace detail

// Adaptive bisection driven by the GK15 error estimate. Throws on failure
// to converge within the depth budget (the caller treats that as a numeric
// error, not a recoverable condition).
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 0.0) {
  struct Interval {
    double a, b;
    int depth;
  };
  double v0, e0;
  detail::gk15(f, a, b, v0, e0);
  const double scale = std::max(std::abs(v0), 1e-300);
  const double tol = std::max(abs_tol, rel_tol * scale);
  if (e0 <= tol) return v0;

  std::vector<Interval> stack{{a, b, 0}};
  double total = 0.0;
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    double v, e;
    detail::gk15(f, iv.a, iv.b, v, e);
    const double local_tol = tol * (iv.b - iv.a) / (b - a);
    if (e <= local_tol) {
      total += v;
      continue;
    }
    if (iv.depth >= 52) {
      throw std::runtime_error("integrate: adaptive quadrature failed to converge");
    }
    const double m = 0.5 * (iv.a + iv.b);
    stack.push_back({iv.a, m, iv.depth + 1});
    stack.push_back({m, iv.b, iv.depth + 1});
  }
  return total;
}

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
// Used for fixed-order tensor quadrature over subspaces.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess for the i-th positive root.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {std::move(x), std::move(w)};
}

}  // namespace manikde
