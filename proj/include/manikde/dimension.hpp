#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "manikde/numeric.hpp"
#include "manikde/point_cloud.hpp"

namespace manikde {

// Local intrinsic dimension from the dyadic ball-count ratio at radius
// eta = n^(-1/(2D+2)): doubling the radius multiplies the local mass by
// about 2^d, so log2 of the count ratio estimates d.
struct DimensionEstimate {
  double delta_hat = 0.0;  // raw log2 ratio
  int d_hat = 0;           // rounded into {1..D}
  double eta = 0.0;
  std::size_t count_eta = 0;
  std::size_t count_2eta = 0;
};

// Fraction of cloud points strictly inside B(x, r). The open-ball
// convention is fixed for determinism; ties at exactly r have measure zero
// under the continuous models.
inline double ball_fraction(const PointCloud& cloud, const double* x, double r) {
  if (r <= 0.0) throw std::domain_error("ball_fraction: r must be > 0");
  const std::size_t n = cloud.size();
  if (n == 0) throw std::domain_error("ball_fraction: empty cloud");
  std::size_t count = 0;
  const double r2 = r * r;
  for (std::size_t i = 0; i < n; ++i) {
    if (squared_distance(x, cloud.point(i), cloud.dim) < r2) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

inline DimensionEstimate estimate_dimension(const PointCloud& cloud, const double* x,
                                            int D) {
  if (D < 1) throw std::domain_error("estimate_dimension: D must be >= 1");
  const std::size_t n = cloud.size();
  if (n == 0) throw std::domain_error("estimate_dimension: empty cloud");

  DimensionEstimate est;
  est.eta = std::pow(static_cast<double>(n), -1.0 / (2.0 * D + 2.0));
  const double eta2 = est.eta * est.eta;
  const double eta2_big = 4.0 * eta2;
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = squared_distance(x, cloud.point(i), cloud.dim);
    if (d2 < eta2) ++est.count_eta;
    if (d2 < eta2_big) ++est.count_2eta;
  }
  if (est.count_eta == 0) {
    // Empty inner ball: no scale information, fall back to the ambient
    // dimension (the defined convention, not an error).
    est.delta_hat = static_cast<double>(D);
  } else {
    // Ratio of raw counts, not difference of two log-fractions: avoids
    // cancellation when both fractions are tiny.
    est.delta_hat = std::log2(static_cast<double>(est.count_2eta) /
                              static_cast<double>(est.count_eta));
  }
  const int rounded = static_cast<int>(std::floor(est.delta_hat + 0.5));
  est.d_hat = std::clamp(rounded, 1, D);
  return est;
}

inline DimensionEstimate estimate_dimension(const PointCloud& cloud, int D) {
  return estimate_dimension(cloud, cloud.x.data(), D);
}

}  // namespace manikde
