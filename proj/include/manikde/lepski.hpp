#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "manikde/kde.hpp"
#include "manikde/kernel.hpp"
#include "manikde/point_cloud.hpp"

namespace manikde {

// Deviation scale driving the pairwise thresholds. The theoretical mode
// uses the Bernstein-derived Omega(h); the numeric mode replaces it with
// the bare stochastic scale sqrt(1/(n h^d)), which keeps thresholds usable
// when the worst-case constants would dwarf every empirical difference.
enum class PsiMode { theoretical, numeric };

struct LepskiConfig {
  Kernel kernel;
  double Theta = 0.0;  // threshold constant, must exceed p
  double p = 1.0;      // moment order the risk statement targets
  double f_max = 1.0;
  PsiMode mode = PsiMode::theoretical;

  void validate() const {
    if (!(Theta > p)) throw std::invalid_argument("LepskiConfig: requires Theta > p");
    if (p < 1.0) throw std::invalid_argument("LepskiConfig: requires p >= 1");
    if (f_max <= 0.0) throw std::invalid_argument("LepskiConfig: requires f_max > 0");
  }
};

struct BandwidthGrid {
  double h_minus = 0.0;
  std::vector<double> levels;  // dyadic, strictly decreasing, largest = 1
};

// Dyadic grid {2^-j : 0 <= j <= log2(1/h-)} with
// h- = (|K|_inf / (2 omega))^(1/d) * n^(-1/d), the scale below which the
// deviation bound stops improving: Omega(h) <= 2 sqrt(2 omega/(n h^d)) on
// every level.
inline BandwidthGrid build_grid(const LepskiConfig& config, std::size_t n, int d) {
  config.validate();
  if (n < 2) throw std::invalid_argument("build_grid: n must be >= 2");
  const double supk = config.kernel.sup_norm();
  const double omega = std::pow(4.0, d) * unit_ball_volume(d) * supk * supk *
                       config.f_max;
  BandwidthGrid grid;
  grid.h_minus = std::pow(supk / (2.0 * omega), 1.0 / d) *
                 std::pow(static_cast<double>(n), -1.0 / d);
  if (grid.h_minus >= 1.0) {
    throw std::invalid_argument("build_grid: n too small, h- >= 1 leaves no grid");
  }
  const int j_max = static_cast<int>(std::floor(std::log2(1.0 / grid.h_minus)));
  grid.levels.reserve(j_max + 1);
  for (int j = 0; j <= j_max; ++j) {
    grid.levels.push_back(std::pow(2.0, -j));
  }
  return grid;
}

// lambda(h) = max(1, sqrt(Theta * d * log(1/h))), natural log.
inline double lepski_lambda(const LepskiConfig& config, int d, double h) {
  const double v = config.Theta * d * std::log(1.0 / h);
  return std::max(1.0, std::sqrt(std::max(0.0, v)));
}

// psi(h, eta) = Omega(h) lambda(h) + Omega(eta) lambda(eta), symmetric in
// its two bandwidth arguments by construction.
inline double psi(const LepskiConfig& config, std::size_t n, int d, double h,
                  double eta) {
  config.validate();
  auto omega_term = [&](double bw) {
    const double nh = static_cast<double>(n) * std::pow(bw, d);
    if (config.mode == PsiMode::numeric) {
      return std::sqrt(1.0 / nh);
    }
    const double supk = config.kernel.sup_norm();
    const double omega = std::pow(4.0, d) * unit_ball_volume(d) * supk * supk *
                         config.f_max;
    return std::sqrt(2.0 * omega / nh) + supk / nh;
  };
  return omega_term(h) * lepski_lambda(config, d, h) +
         omega_term(eta) * lepski_lambda(config, d, eta);
}

struct TraceRow {
  double h = 0.0;
  double eta = 0.0;
  double abs_diff = 0.0;
  double psi = 0.0;
  bool pass = false;
};

struct Selection {
  double h_hat = 0.0;
  std::vector<TraceRow> trace;
  // Set when no level passed; cannot happen by construction (h tests
  // against itself with |diff| = 0), but guarded anyway.
  bool fallback = false;
  // Estimates per grid level, aligned with the grid order, for reuse.
  std::vector<double> estimates;
};

// Largest grid level whose estimate stays psi-close to every estimate at a
// smaller level. Scans levels in decreasing order; within a level, every
// comparison is evaluated and traced even after a failure, so the trace
// length is the full sum of |H(h)| over scanned levels.
inline Selection select_bandwidth(const PointCloud& cloud, const double* x,
                                  const LepskiConfig& config,
                                  const BandwidthGrid& grid, int d) {
  config.validate();
  if (grid.levels.empty()) throw std::invalid_argument("select_bandwidth: empty grid");
  const std::size_t m = grid.levels.size();
  const std::size_t n = cloud.size();

  Selection sel;
  sel.estimates.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    EstimatorConfig ec{config.kernel, grid.levels[i], config.f_max, d};
    sel.estimates[i] = estimate(cloud, ec, x);
  }

  for (std::size_t i = 0; i < m; ++i) {
    const double h = grid.levels[i];
    bool all_pass = true;
    for (std::size_t j = i; j < m; ++j) {
      const double eta = grid.levels[j];
      TraceRow row;
      row.h = h;
      row.eta = eta;
      row.abs_diff = std::abs(sel.estimates[i] - sel.estimates[j]);
      row.psi = psi(config, n, d, h, eta);
      row.pass = row.abs_diff <= row.psi;
      if (!row.pass) all_pass = false;
      sel.trace.push_back(row);
    }
    if (all_pass) {
      sel.h_hat = h;
      return sel;
    }
  }
  sel.h_hat = grid.levels.back();
  sel.fallback = true;
  return sel;
}

inline Selection select_bandwidth(const PointCloud& cloud, const LepskiConfig& config,
                                  const BandwidthGrid& grid, int d) {
  return select_bandwidth(cloud, cloud.x.data(), config, grid, d);
}

// Dimension-indexed variant: rebuilds the kernel, the variance constant,
// and the grid for the plugged-in dimension, then runs the same scan.
inline Selection select_adaptive(const PointCloud& cloud, const double* x,
                                 const LepskiConfig& config, int d_hat) {
  if (d_hat < 1) throw std::invalid_argument("select_adaptive: d_hat must be >= 1");
  LepskiConfig local = config;
  if (config.kernel.dim() != d_hat) {
    local.kernel = Kernel(d_hat, config.kernel.order());
  }
  const BandwidthGrid grid = build_grid(local, cloud.size(), d_hat);
  return select_bandwidth(cloud, x, local, grid, d_hat);
}

inline void write_trace_csv(const std::vector<TraceRow>& trace, std::ostream& os) {
  os << "h,eta,abs_diff,psi,pass\n";
  char buf[160];
  for (const TraceRow& row : trace) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d\n", row.h, row.eta,
                  row.abs_diff, row.psi, row.pass ? 1 : 0);
    os << buf;
  }
}

}  // namespace manikde
