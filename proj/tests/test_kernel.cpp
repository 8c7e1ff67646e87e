#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "manikde/kernel.hpp"
#include "manikde/numeric.hpp"
#include "manikde/quadrature.hpp"
#include "manikde/rng.hpp"

using namespace manikde;

namespace {

// Order recursion written literally, as an independent oracle for the
// unrolled evaluation.
double literal_kernel(int d, int ell, double r, double lambda_d) {
  if (ell == 1) return bump_radial(r) / lambda_d;
  const int l = ell - 1;
  const double scaled = std::pow(2.0, 1.0 / l) * r;
  return std::pow(2.0, 1.0 + static_cast<double>(d) / l) *
             literal_kernel(d, l, scaled, lambda_d) -
         literal_kernel(d, l, r, lambda_d);
}

// Composite Simpson, an integration scheme independent of the adaptive
// Gauss-Kronrod rule the library uses.
template <class F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

double oracle_lambda(int d) {
  return sphere_surface_area(d) *
         simpson([d](double r) { return std::pow(r, d - 1) * bump_radial(r); }, 0.0,
                 1.0, 1000000);
}

}  // namespace

TEST_CASE("bump values at reference radii") {
  const double z0[3] = {0.0, 0.0, 0.0};
  CHECK(bump(z0, 3) == Catch::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(bump_radial(0.0) == Catch::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(bump_radial(0.5) == Catch::Approx(std::exp(-4.0 / 3.0)).epsilon(1e-15));
  CHECK(bump_radial(1.0) == 0.0);
  CHECK(bump_radial(2.0) == 0.0);
  // Smooth cutoff: one-sided limit at 1 is 0.
  CHECK(bump_radial(1.0 - 1e-8) < 1e-10);
  // Radial dependence only.
  const double za[2] = {0.3, 0.4};
  const double zb[2] = {0.5, 0.0};
  CHECK(bump(za, 2) == Catch::Approx(bump(zb, 2)).epsilon(1e-15));
}

TEST_CASE("base normalization constants against frozen oracle values") {
  // Regression constants computed once with independent high-precision
  // quadrature and frozen here.
  CHECK(compute_lambda_d(1) == Catch::Approx(0.44399381616807943782).epsilon(1e-9));
  CHECK(compute_lambda_d(2) == Catch::Approx(0.46651239317833006888).epsilon(1e-9));
  CHECK(compute_lambda_d(3) == Catch::Approx(0.44108888727660440046).epsilon(1e-9));
  // Cross-check against composite Simpson at desk precision.
  for (int d = 1; d <= 3; ++d) {
    CHECK(compute_lambda_d(d) == Catch::Approx(oracle_lambda(d)).epsilon(1e-8));
  }
}

TEST_CASE("normalization constant agrees with Monte-Carlo ball integration") {
  // 10^7 cube draws, rejection to the ball folded into the integrand being
  // zero outside; agreement to 3 significant digits.
  for (int d = 1; d <= 3; ++d) {
    Rng rng(1234 + d);
    double sum = 0.0;
    const int N = 10000000;
    std::vector<double> z(d);
    for (int i = 0; i < N; ++i) {
      for (int k = 0; k < d; ++k) z[k] = 2.0 * rng.uniform() - 1.0;
      sum += bump(z.data(), d);
    }
    const double mc = std::pow(2.0, d) * sum / N;
    CHECK(mc == Catch::Approx(compute_lambda_d(d)).epsilon(5e-3));
  }
}

TEST_CASE("normalization constant bounds from the integrand bound") {
  // 0 < bump <= e^{-1} pointwise on the ball, so 0 < lambda_d < zeta_d e^{-1}
  // and a fortiori lambda_d < zeta_d.
  for (int d = 1; d <= 4; ++d) {
    const double lam = compute_lambda_d(d);
    CHECK(lam > 0.0);
    CHECK(lam < unit_ball_volume(d) * std::exp(-1.0));
    CHECK(lam < unit_ball_volume(d));
  }
}

TEST_CASE("unrolled evaluation equals the literal recursion") {
  Rng rng(7);
  for (int d = 1; d <= 3; ++d) {
    const double lam = compute_lambda_d(d);
    for (int ell = 1; ell <= 3; ++ell) {
      Kernel k(d, ell);
      CHECK(k.terms().size() == (1u << (ell - 1)));
      for (int i = 0; i < 100; ++i) {
        const double r = 1.2 * rng.uniform();
        const double want = literal_kernel(d, ell, r, lam);
        CHECK(std::abs(k.eval_radial(r) - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("order-1 kernel value at the origin") {
  Kernel k(1, 1);
  CHECK(k.eval_radial(0.0) ==
        Catch::Approx(std::exp(-1.0) / compute_lambda_d(1)).epsilon(1e-12));
}

TEST_CASE("order-2 kernel is one unrolling step") {
  for (int d = 1; d <= 2; ++d) {
    Kernel k1(d, 1);
    Kernel k2(d, 2);
    Rng rng(11 + d);
    for (int i = 0; i < 100; ++i) {
      const double r = rng.uniform();
      const double want = std::pow(2.0, 1.0 + d) * k1.eval_radial(2.0 * r) -
                          k1.eval_radial(r);
      CHECK(k2.eval_radial(r) == Catch::Approx(want).margin(1e-13));
    }
  }
}

TEST_CASE("subspace normalization for all orders") {
  // Radial reduction of the subspace integral; the acceptance suite does
  // the same check with honest tensor quadrature over random frames.
  for (int d = 1; d <= 2; ++d) {
    for (int ell = 1; ell <= 3; ++ell) {
      Kernel k(d, ell);
      const double I =
          sphere_surface_area(d) *
          integrate(
              [&](double r) {
                return std::pow(r, d - 1) * k.eval_radial(r);
              },
              0.0, 1.0, 1e-10, 1e-12);
      CHECK(I == Catch::Approx(1.0).margin(1e-6));
    }
  }
}

TEST_CASE("compact support is exact") {
  for (int ell = 1; ell <= 3; ++ell) {
    Kernel k(2, ell);
    CHECK(k.eval_radial(1.0) == 0.0);
    CHECK(k.eval_radial(1.0000001) == 0.0);
    CHECK(k.eval_radial(25.0) == 0.0);
    const double z[2] = {0.8, 0.7};  // norm > 1
    CHECK(k.eval(z, 2) == 0.0);
  }
}

TEST_CASE("higher-order kernels go negative") {
  for (int d = 1; d <= 2; ++d) {
    for (int ell = 2; ell <= 3; ++ell) {
      Kernel k(d, ell);
      double min_val = 0.0;
      for (int i = 0; i <= 2000; ++i) {
        min_val = std::min(min_val, k.eval_radial(i / 2000.0));
      }
      CHECK(min_val < 0.0);
    }
  }
}

TEST_CASE("rotational invariance") {
  Kernel k(2, 3);
  Rng rng(99);
  for (int i = 0; i < 50; ++i) {
    const double r = rng.uniform();
    const double phi = 2.0 * M_PI * rng.uniform();
    const double za[2] = {r, 0.0};
    const double zb[2] = {r * std::cos(phi), r * std::sin(phi)};
    CHECK(std::abs(k.eval(za, 2) - k.eval(zb, 2)) < 1e-12);
  }
}

TEST_CASE("first moment vanishes") {
  for (int ell = 1; ell <= 3; ++ell) {
    Kernel k(1, ell);
    const double m1 = integrate(
        [&](double t) { return t * k.eval_radial(std::abs(t)); }, -1.0, 1.0, 1e-10,
        1e-12);
    CHECK(std::abs(m1) < 1e-8);
  }
}

TEST_CASE("sup norm: order 1 peaks at the origin") {
  for (int d = 1; d <= 3; ++d) {
    Kernel k(d, 1);
    CHECK(k.sup_norm() ==
          Catch::Approx(std::exp(-1.0) / compute_lambda_d(d)).epsilon(1e-10));
  }
}

TEST_CASE("sup norm survives grid refinement") {
  Kernel k(1, 2);
  double fine = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    fine = std::max(fine, std::abs(k.eval_radial(i / 100000.0)));
  }
  CHECK(k.sup_norm() >= fine - 1e-8);
  CHECK(k.sup_norm() == Catch::Approx(fine).margin(1e-8));
}

TEST_CASE("sup norm dominates the center value and matches frozen values") {
  const double frozen[2][3] = {{0.8286, 2.4857, 4.5449}, {0.7886, 5.5200, 16.5600}};
  for (int d = 1; d <= 2; ++d) {
    for (int ell = 1; ell <= 3; ++ell) {
      Kernel k(d, ell);
      CHECK(k.sup_norm() >= std::abs(k.eval_radial(0.0)));
      CHECK(k.sup_norm() == Catch::Approx(frozen[d - 1][ell - 1]).epsilon(2e-4));
    }
  }
}
