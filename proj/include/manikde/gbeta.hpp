#pragma once

#include <cmath>
#include <stdexcept>

#include "manikde/rng.hpp"

namespace manikde {

// Piecewise-polynomial density on [-1/2, 1/2] with a deliberate smoothness
// break at 0: the left branch is exactly beta-Holder there, the right branch
// one order smoother, so beta controls the regularity of the whole model.
//
//   g(v) = C * (1 - (-2v)^beta)      on [-1/2, 0)
//   g(v) = C * (1 - (2v)^(beta+1))   on [0, 1/2]
//
// C makes the total mass 1; closed form from the two power-term integrals.
inline double gbeta_norm_constant(int beta) {
  if (beta < 1) throw std::domain_error("gbeta: beta must be >= 1");
  const double b = static_cast<double>(beta);
  return 2.0 / (b / (b + 1.0) + (b + 1.0) / (b + 2.0));
}

inline double gbeta_pdf(double v, int beta) {
  if (v < -0.5 || v > 0.5) throw std::domain_error("gbeta_pdf: v outside [-1/2, 1/2]");
  const double c = gbeta_norm_constant(beta);
  if (v < 0.0) return c * (1.0 - std::pow(-2.0 * v, static_cast<double>(beta)));
  return c * (1.0 - std::pow(2.0 * v, static_cast<double>(beta + 1)));
}

// Antiderivative evaluated branchwise; continuous, 0 at -1/2, 1 at 1/2.
inline double gbeta_cdf(double v, int beta) {
  if (v < -0.5 || v > 0.5) throw std::domain_error("gbeta_cdf: v outside [-1/2, 1/2]");
  const double c = gbeta_norm_constant(beta);
  const double b = static_cast<double>(beta);
  if (v < 0.0) {
    return c * (v + std::pow(-2.0 * v, b + 1.0) / (2.0 * (b + 1.0)) + 0.5 -
                1.0 / (2.0 * (b + 1.0)));
  }
  return c * (b / (2.0 * (b + 1.0)) + v -
              std::pow(2.0 * v, b + 2.0) / (2.0 * (b + 2.0)));
}

// Inverse CDF by bisection to 1e-12. Deterministic sample counts (no
// rejection), one uniform consumed per draw.
inline double gbeta_quantile(double u, int beta) {
  double lo = -0.5, hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (gbeta_cdf(mid, beta) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double gbeta_sample(Rng& rng, int beta) {
  return gbeta_quantile(rng.uniform(), beta);
}

}  // namespace manikde
