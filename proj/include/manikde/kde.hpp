#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "manikde/kernel.hpp"
#include "manikde/numeric.hpp"
#include "manikde/point_cloud.hpp"
#include "manikde/rng.hpp"

namespace manikde {

// Everything a pointwise density evaluation needs. d is the normalization
// exponent (intrinsic dimension), which must match the kernel's subspace
// dimension; f_max feeds the variance constant omega.
struct EstimatorConfig {
  Kernel kernel;
  double h = 0.0;
  double f_max = 1.0;
  int d = 1;

  void validate() const {
    if (h <= 0.0) throw std::invalid_argument("EstimatorConfig: h must be > 0");
    if (d != kernel.dim()) {
      throw std::invalid_argument("EstimatorConfig: d must equal kernel.dim()");
    }
    if (f_max <= 0.0) throw std::invalid_argument("EstimatorConfig: f_max must be > 0");
  }
};

struct DeviationBound {
  double omega = 0.0;    // 4^d * zeta_d * |K|_inf^2 * f_max
  double Omega_h = 0.0;  // sqrt(2 omega / (n h^d)) + |K|_inf / (n h^d)
};

inline DeviationBound deviation_bound(const EstimatorConfig& config, std::size_t n) {
  config.validate();
  if (n < 1) throw std::invalid_argument("deviation_bound: n must be >= 1");
  DeviationBound b;
  const double supk = config.kernel.sup_norm();
  b.omega = std::pow(4.0, config.d) * unit_ball_volume(config.d) * supk * supk *
            config.f_max;
  const double nh = static_cast<double>(n) * std::pow(config.h, config.d);
  b.Omega_h = std::sqrt(2.0 * b.omega / nh) + supk / nh;
  return b;
}

// Pointwise estimate (1 / (n h^d)) * sum_i K((x - X_i) / h), summed in
// index order with compensation. Points at distance >= h contribute exactly
// 0 (compact support) and are skipped, so the accelerated path below can
// reproduce this sum bit for bit.
inline double estimate(const PointCloud& cloud, const EstimatorConfig& config,
                       const double* x) {
  config.validate();
  const std::size_t n = cloud.size();
  if (n == 0) throw std::domain_error("estimate: empty cloud");
  const double h = config.h;
  KahanSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    const double r2 = squared_distance(x, cloud.point(i), cloud.dim);
    if (r2 >= h * h) continue;
    sum.add(config.kernel.eval_radial(std::sqrt(r2) / h));
  }
  return sum.value() / (static_cast<double>(n) * std::pow(h, config.d));
}

inline double estimate(const PointCloud& cloud, const EstimatorConfig& config) {
  return estimate(cloud, config, cloud.x.data());
}

// Uniform-grid spatial index over the ambient box, cell edge = h. A query
// at bandwidth <= h touches 3^dim neighboring cells; candidates are sorted
// back into index order, so the sum visits the same terms in the same
// order as the brute-force path.
class BucketIndex {
 public:
  BucketIndex(const PointCloud& cloud, double cell)
      : cloud_(&cloud), cell_(cell), dim_(cloud.dim) {
    if (cell <= 0.0) throw std::invalid_argument("BucketIndex: cell must be > 0");
    origin_.assign(dim_, 0.0);
    const std::size_t n = cloud.size();
    if (n == 0) return;
    for (int k = 0; k < dim_; ++k) origin_[k] = cloud.point(0)[k];
    for (std::size_t i = 1; i < n; ++i) {
      for (int k = 0; k < dim_; ++k) {
        origin_[k] = std::min(origin_[k], cloud.point(i)[k]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      buckets_[key_of(cloud.point(i))].push_back(i);
    }
  }

  // Indices of all points within radius <= cell of x, ascending.
  std::vector<std::size_t> candidates(const double* x) const {
    std::vector<std::size_t> out;
    std::vector<long long> base = cell_coords(x);
    std::vector<long long> offset(dim_, -1);
    while (true) {
      std::vector<long long> cc(dim_);
      for (int k = 0; k < dim_; ++k) cc[k] = base[k] + offset[k];
      auto it = buckets_.find(pack(cc));
      if (it != buckets_.end()) {
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
      int k = 0;
      while (k < dim_ && offset[k] == 1) {
        offset[k] = -1;
        ++k;
      }
      if (k == dim_) break;
      ++offset[k];
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  double estimate(const EstimatorConfig& config, const double* x) const {
    config.validate();
    if (config.h > cell_) {
      throw std::invalid_argument("BucketIndex: bandwidth exceeds cell size");
    }
    const std::size_t n = cloud_->size();
    if (n == 0) throw std::domain_error("BucketIndex: empty cloud");
    const double h = config.h;
    KahanSum sum;
    for (std::size_t i : candidates(x)) {
      const double r2 = squared_distance(x, cloud_->point(i), dim_);
      if (r2 >= h * h) continue;
      sum.add(config.kernel.eval_radial(std::sqrt(r2) / h));
    }
    return sum.value() / (static_cast<double>(n) * std::pow(h, config.d));
  }

 private:
  std::vector<long long> cell_coords(const double* p) const {
    std::vector<long long> cc(dim_);
    for (int k = 0; k < dim_; ++k) {
      cc[k] = static_cast<long long>(std::floor((p[k] - origin_[k]) / cell_));
    }
    return cc;
  }

  std::uint64_t key_of(const double* p) const { return pack(cell_coords(p)); }

  // Cell coordinates fit comfortably in 21 bits each for the data scales
  // involved; pack into one 64-bit key.
  std::uint64_t pack(const std::vector<long long>& cc) const {
    std::uint64_t key = 1469598103934665603ULL;
    for (long long c : cc) {
      key ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL;
      key *= 1099511628211ULL;
    }
    return key;
  }

  const PointCloud* cloud_;
  double cell_;
  int dim_;
  std::vector<double> origin_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

// Monte-Carlo bias: mean over N independent single-point clouds of the
// one-point estimate, minus the true density at x. The expectation of the
// estimator does not depend on the cloud size, so N single draws and one
// size-N cloud average to the same thing; we use the latter.
template <class Model>
double mc_bias(const Model& model, const EstimatorConfig& config, std::size_t N,
               std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("mc_bias: N must be >= 1");
  const PointCloud cloud = model.sample(N, seed);
  const double f_true = model.ground_truth().f_at_x;
  return estimate(cloud, config) - f_true;
}

}  // namespace manikde
