#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "manikde/curve_model.hpp"
#include "manikde/dimension.hpp"
#include "manikde/geodesic.hpp"
#include "manikde/kde.hpp"
#include "manikde/lepski.hpp"
#include "manikde/parallel.hpp"
#include "manikde/rng.hpp"
#include "manikde/torus_model.hpp"

namespace manikde {

enum class Variant { fixed, lepski, adaptive_dim, geodesic_1d };
enum class RiskStat { mean_sq, median_sq };

using AnyModel = std::variant<CurveModel, TorusModel>;

inline int model_intrinsic_dim(const AnyModel& m) {
  return std::holds_alternative<CurveModel>(m) ? 1 : 2;
}
inline int model_ambient_dim(const AnyModel& m) {
  return std::visit([](const auto& mod) { return mod.D; }, m);
}
inline int model_beta(const AnyModel& m) {
  return std::visit([](const auto& mod) { return mod.beta; }, m);
}
inline GroundTruth model_ground_truth(const AnyModel& m) {
  return std::visit([](const auto& mod) { return mod.ground_truth(); }, m);
}
inline PointCloud model_sample(const AnyModel& m, std::size_t n, std::uint64_t seed) {
  return std::visit([&](const auto& mod) { return mod.sample(n, seed); }, m);
}

struct BenchmarkConfig {
  AnyModel model;
  Variant variant = Variant::fixed;
  std::vector<std::size_t> n_grid;
  std::size_t N_reps = 1;
  int ell = 3;
  RiskStat stat = RiskStat::mean_sq;
  std::uint64_t base_seed = 0;

  // Bandwidth-selection knobs (lepski / adaptive_dim variants).
  double Theta = 0.0;  // <= 0 means the default p + 1
  double p = 2.0;
  PsiMode psi_mode = PsiMode::numeric;
  // Degenerate-grid override: when set, selection runs on exactly these
  // levels instead of the dyadic grid.
  std::optional<std::vector<double>> lepski_grid;

  // Graph-estimator knob: density floor for the epsilon schedule.
  double f_min = 1.0;

  unsigned threads = 0;  // 0 = default_thread_count()
  std::size_t bootstrap_resamples = 1000;

  void validate() const {
    if (n_grid.empty()) throw std::invalid_argument("BenchmarkConfig: empty n_grid");
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
      if (n_grid[i] <= n_grid[i - 1]) {
        throw std::invalid_argument("BenchmarkConfig: n_grid must be strictly increasing");
      }
    }
    if (N_reps < 1) throw std::invalid_argument("BenchmarkConfig: N_reps must be >= 1");
    if (ell < 1) throw std::invalid_argument("BenchmarkConfig: ell must be >= 1");
  }

  double theta_or_default() const { return Theta > 0.0 ? Theta : p + 1.0; }
};

struct BenchmarkReport {
  std::vector<std::size_t> n_grid;
  std::vector<double> risks;                  // one per n
  std::vector<std::vector<double>> raw_errors;  // [n_index][rep], squared errors
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_ci_lo = 0.0;  // bootstrap percentile CI over repetitions
  double slope_ci_hi = 0.0;
  double theoretical_slope = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

// Ordinary least squares for y = slope * x + intercept.
inline std::tuple<double, double, double> ols_fit(const std::vector<double>& xs,
                                                  const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::domain_error("ols_fit: need at least 2 paired points");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::domain_error("ols_fit: xs are all identical");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {slope, intercept, r2};
}

namespace detail {

inline double risk_statistic(std::vector<double> errors, RiskStat stat) {
  if (stat == RiskStat::mean_sq) {
    KahanSum s;
    for (double e : errors) s.add(e);
    return s.value() / static_cast<double>(errors.size());
  }
  std::sort(errors.begin(), errors.end());
  const std::size_t n = errors.size();
  if (n % 2 == 1) return errors[n / 2];
  return 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
}

// Squared error of one repetition under the configured variant.
inline double one_rep_sq_error(const BenchmarkConfig& config, const Kernel& kernel,
                               const GroundTruth& gt, std::size_t n,
                               std::uint64_t seed) {
  const PointCloud cloud = model_sample(config.model, n, seed);
  const int d = model_intrinsic_dim(config.model);
  const int beta = model_beta(config.model);
  double fhat = 0.0;
  switch (config.variant) {
    case Variant::fixed: {
      const double h = std::pow(static_cast<double>(n),
                                -1.0 / (2.0 * beta + static_cast<double>(d)));
      EstimatorConfig ec{kernel, h, gt.f_max, d};
      fhat = estimate(cloud, ec);
      break;
    }
    case Variant::lepski: {
      LepskiConfig lc{kernel, config.theta_or_default(), config.p, gt.f_max,
                      config.psi_mode};
      BandwidthGrid grid;
      if (config.lepski_grid) {
        grid.levels = *config.lepski_grid;
        grid.h_minus = grid.levels.back();
      } else {
        grid = build_grid(lc, n, d);
      }
      const Selection sel = select_bandwidth(cloud, lc, grid, d);
      EstimatorConfig ec{kernel, sel.h_hat, gt.f_max, d};
      fhat = estimate(cloud, ec);
      break;
    }
    case Variant::adaptive_dim: {
      const int D = model_ambient_dim(config.model);
      const int d_hat = estimate_dimension(cloud, D).d_hat;
      LepskiConfig lc{kernel, config.theta_or_default(), config.p, gt.f_max,
                      config.psi_mode};
      const Selection sel = select_adaptive(cloud, cloud.x.data(), lc, d_hat);
      const Kernel k_hat = d_hat == kernel.dim() ? kernel : Kernel(d_hat, kernel.order());
      EstimatorConfig ec{k_hat, sel.h_hat, gt.f_max, d_hat};
      fhat = estimate(cloud, ec);
      break;
    }
    case Variant::geodesic_1d: {
      const double h =
          std::pow(static_cast<double>(n), -1.0 / (2.0 * beta + 1.0));
      fhat = estimate_1d(cloud, h, kernel.order(), config.p, config.f_min);
      break;
    }
  }
  return sq(fhat - gt.f_at_x);
}

inline void fit_risk_curve(const std::vector<std::size_t>& ns,
                           const std::vector<double>& risks, BenchmarkReport& report) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (risks[i] <= 0.0) {
      report.warnings.push_back("risk at n=" + std::to_string(ns[i]) +
                                " is zero; point skipped in the regression");
      continue;
    }
    xs.push_back(std::log(static_cast<double>(ns[i])));
    ys.push_back(std::log(risks[i]));
  }
  if (xs.size() < 2) {
    report.warnings.push_back(
        "fewer than 2 positive risk points; slope not fitted");
    return;
  }
  std::tie(report.slope, report.intercept, report.r_squared) = ols_fit(xs, ys);
}

inline BenchmarkReport run_engine(const BenchmarkConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const int d = model_intrinsic_dim(config.model);
  const Kernel kernel(d, config.ell);
  const GroundTruth gt = model_ground_truth(config.model);

  BenchmarkReport report;
  report.n_grid = config.n_grid;
  const std::size_t k = config.n_grid.size();
  const std::size_t N = config.N_reps;
  report.raw_errors.assign(k, std::vector<double>(N, 0.0));

  // Flat (n_index, rep) loop; each slot owns its seed, so any thread count
  // produces the same numbers.
  parallel_for(
      k * N,
      [&](std::size_t idx) {
        const std::size_t i = idx / N;
        const std::size_t rep = idx % N;
        const std::uint64_t seed = derive_seed(config.base_seed, i, rep);
        report.raw_errors[i][rep] =
            one_rep_sq_error(config, kernel, gt, config.n_grid[i], seed);
      },
      config.threads);

  report.risks.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    report.risks[i] = risk_statistic(report.raw_errors[i], config.stat);
  }
  fit_risk_curve(config.n_grid, report.risks, report);

  const int s = std::min(model_beta(config.model), config.ell);
  report.theoretical_slope = -2.0 * s / (2.0 * s + static_cast<double>(d));

  // Percentile bootstrap on the slope: resample repetitions within each n,
  // refit. Degenerate resamples (a zero risk) are skipped.
  if (config.bootstrap_resamples > 0 && N >= 2) {
    std::vector<double> slopes;
    slopes.reserve(config.bootstrap_resamples);
    Rng boot(derive_seed(config.base_seed, 0x626f6f74ULL));
    std::vector<double> xs, ys;
    std::vector<double> resample(N);
    for (std::size_t b = 0; b < config.bootstrap_resamples; ++b) {
      xs.clear();
      ys.clear();
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t r = 0; r < N; ++r) {
          const std::size_t pick =
              static_cast<std::size_t>(boot.uniform() * static_cast<double>(N));
          resample[r] = report.raw_errors[i][std::min(pick, N - 1)];
        }
        const double risk = risk_statistic(resample, config.stat);
        if (risk > 0.0) {
          xs.push_back(std::log(static_cast<double>(config.n_grid[i])));
          ys.push_back(std::log(risk));
        }
      }
      if (xs.size() >= 2) {
        slopes.push_back(std::get<0>(ols_fit(xs, ys)));
      }
    }
    if (slopes.size() >= 2) {
      std::sort(slopes.begin(), slopes.end());
      const std::size_t lo_idx =
          static_cast<std::size_t>(0.025 * static_cast<double>(slopes.size()));
      const std::size_t hi_idx = std::min(
          slopes.size() - 1,
          static_cast<std::size_t>(0.975 * static_cast<double>(slopes.size())));
      report.slope_ci_lo = slopes[lo_idx];
      report.slope_ci_hi = slopes[hi_idx];
    }
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace detail

// Fixed-bandwidth and graph-estimator risk curves: h follows the oracle
// schedule n^(-1/(2 beta + d)) per grid point.
inline BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
  if (config.variant != Variant::fixed && config.variant != Variant::geodesic_1d) {
    throw std::invalid_argument("run_benchmark: use adaptive_benchmark for selection variants");
  }
  return detail::run_engine(config);
}

// Per-repetition bandwidth selection (plain or dimension-plugged).
inline BenchmarkReport adaptive_benchmark(const BenchmarkConfig& config) {
  if (config.variant != Variant::lepski && config.variant != Variant::adaptive_dim) {
    throw std::invalid_argument("adaptive_benchmark: variant must be lepski or adaptive_dim");
  }
  return detail::run_engine(config);
}

}  // namespace manikde
