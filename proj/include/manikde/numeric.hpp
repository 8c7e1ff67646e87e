#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace manikde {

// Compensated accumulator. Signed kernel sums cancel heavily, so every
// reduction in the library runs through this in a fixed index order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// Volume of the unit ball in R^d via the two-step recurrence
// zeta_d = zeta_{d-2} * 2*pi/d, zeta_0 = 1, zeta_1 = 2.
// Exact closed forms at integer d, no general Gamma needed.
inline double unit_ball_volume(int d) {
  if (d < 0) throw std::domain_error("unit_ball_volume: d must be >= 0");
  if (d == 0) return 1.0;
  if (d == 1) return 2.0;
  double v = (d % 2 == 0) ? 1.0 : 2.0;
  for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) {
    v *= 2.0 * M_PI / static_cast<double>(k);
  }
  return v;
}

// Surface area of the unit (d-1)-sphere embedded in R^d: S_{d-1} = d * zeta_d.
inline double sphere_surface_area(int d) {
  if (d < 1) throw std::domain_error("sphere_surface_area: d must be >= 1");
  return static_cast<double>(d) * unit_ball_volume(d);
}

inline double sq(double x) { return x * x; }

// Squared Euclidean distance over a contiguous coordinate block.
inline double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) s += sq(a[k] - b[k]);
  return s;
}

inline double distance(const double* a, const double* b, int dim) {
  return std::sqrt(squared_distance(a, b, dim));
}

}  // namespace manikde
