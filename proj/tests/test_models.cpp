#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "manikde/curve_model.hpp"
#include "manikde/gbeta.hpp"
#include "manikde/quadrature.hpp"
#include "manikde/rng.hpp"
#include "manikde/torus_model.hpp"

using namespace manikde;

namespace {

// Kolmogorov-Smirnov statistic of a sample against a CDF.
template <class Cdf>
double ks_stat(std::vector<double> s, Cdf cdf) {
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double F = cdf(s[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
  }
  return d;
}

}  // namespace

TEST_CASE("beta-profile density basics") {
  // Closed-form normalization at beta = 2.
  CHECK(gbeta_norm_constant(2) == Catch::Approx(24.0 / 17.0).epsilon(1e-14));
  CHECK_THROWS_AS(gbeta_norm_constant(0), std::domain_error);
  for (int beta = 1; beta <= 4; ++beta) {
    const double C = gbeta_norm_constant(beta);
    CHECK(C > 0.0);
    // Vanishes at the support edges, continuous at the junction.
    CHECK(gbeta_pdf(-0.5, beta) == Catch::Approx(0.0).margin(1e-14));
    CHECK(gbeta_pdf(0.5, beta) == Catch::Approx(0.0).margin(1e-14));
    CHECK(gbeta_pdf(0.0, beta) == Catch::Approx(C).epsilon(1e-14));
    CHECK(gbeta_pdf(-1e-12, beta) == Catch::Approx(C).epsilon(1e-9));
    // Unit mass, integrating each branch separately around the kink.
    const double mass =
        integrate([beta](double v) { return gbeta_pdf(v, beta); }, -0.5, 0.0,
                  1e-12) +
        integrate([beta](double v) { return gbeta_pdf(v, beta); }, 0.0, 0.5,
                  1e-12);
    CHECK(mass == Catch::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(gbeta_pdf(0.6, 2), std::domain_error);
}

TEST_CASE("beta-profile CDF and quantile") {
  for (int beta = 1; beta <= 3; ++beta) {
    CHECK(gbeta_cdf(-0.5, beta) == Catch::Approx(0.0).margin(1e-12));
    CHECK(gbeta_cdf(0.5, beta) == Catch::Approx(1.0).epsilon(1e-14));
    // Closed form against quadrature of the density.
    for (int i = 1; i < 10; ++i) {
      const double v = -0.5 + i * 0.1;
      double want;
      if (v <= 0.0) {
        want = integrate([beta](double t) { return gbeta_pdf(t, beta); }, -0.5, v,
                         1e-12, 1e-14);
      } else {
        want = gbeta_cdf(0.0, beta) +
               integrate([beta](double t) { return gbeta_pdf(t, beta); }, 0.0, v,
                         1e-12, 1e-14);
      }
      CHECK(gbeta_cdf(v, beta) == Catch::Approx(want).margin(1e-10));
    }
    // Quantile inverts the CDF.
    for (int i = 1; i < 20; ++i) {
      const double u = i / 20.0;
      CHECK(gbeta_cdf(gbeta_quantile(u, beta), beta) ==
            Catch::Approx(u).margin(1e-10));
    }
  }
}

TEST_CASE("beta-profile sampling matches the CDF") {
  Rng rng(2024);
  std::vector<double> s(100000);
  for (auto& v : s) v = gbeta_sample(rng, 2);
  CHECK(ks_stat(s, [](double v) { return gbeta_cdf(v, 2); }) < 0.01);
}

TEST_CASE("curve embedding reference points") {
  CurveModel m;  // a = 1/8, w = 6
  const auto p0 = m.embed(0.0);
  REQUIRE(p0.size() == 2);
  CHECK(p0[0] == Catch::Approx(1.125).epsilon(1e-15));
  CHECK(p0[1] == Catch::Approx(0.0).margin(1e-15));
  // 36-degree lattice point, frozen from high-precision evaluation.
  const auto p3 = m.embed(0.3);
  CHECK(p3[0] == Catch::Approx(-0.27038987007807900).epsilon(1e-13));
  CHECK(p3[1] == Catch::Approx(0.83217445175825938).epsilon(1e-13));

  CurveModel circ;
  circ.a = 0.0;
  const auto q = circ.embed(0.25);
  CHECK(q[0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(q[1] == Catch::Approx(1.0).epsilon(1e-14));

  CurveModel padded;
  padded.D = 4;
  const auto r = padded.embed(0.1);
  REQUIRE(r.size() == 4);
  CHECK(r[2] == 0.0);
  CHECK(r[3] == 0.0);
}

TEST_CASE("curve speed and density reference values") {
  CurveModel m;
  CHECK(m.speed(0.0) == Catch::Approx(2.0 * M_PI * 1.75).epsilon(1e-14));
  CHECK(m.density_at(0.0) ==
        Catch::Approx((24.0 / 17.0) / (2.0 * M_PI * 1.75)).epsilon(1e-14));
  CHECK(m.density_at(0.0) == Catch::Approx(0.12839390367077272).epsilon(1e-13));

  CurveModel circ;
  circ.a = 0.0;
  for (double v : {0.0, 0.2, -0.3}) {
    CHECK(circ.speed(v) == Catch::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(circ.density_at(v) ==
          Catch::Approx(gbeta_pdf(v, 2) / (2.0 * M_PI)).epsilon(1e-13));
  }

  CurveModel sharp;
  sharp.lambda = 8.0;
  CHECK(sharp.density_at(0.1) == 0.0);  // outside the shrunken support
  CHECK(sharp.density_at(0.0) ==
        Catch::Approx(8.0 * (24.0 / 17.0) / (2.0 * M_PI * 1.75)).epsilon(1e-13));
}

TEST_CASE("curve density integrates to one over arc length") {
  for (double lambda : {1.0, 8.0}) {
    CurveModel m;
    m.lambda = lambda;
    // Midpoint Riemann sum in the parameter: integral of f(Phi(v)) |Phi'(v)|.
    const int N = 200000;
    KahanSum s;
    for (int i = 0; i < N; ++i) {
      const double v = -0.5 + (i + 0.5) / N;
      s.add(m.density_at(v) * m.speed(v) / N);
    }
    CHECK(s.value() == Catch::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("curve length frozen value and Riemann cross-check") {
  CurveModel m;
  const double L = m.total_length();
  CHECK(L == Catch::Approx(7.2035447476412730).epsilon(1e-10));
  const int N = 1000000;
  KahanSum s;
  for (int i = 0; i < N; ++i) s.add(m.speed(-0.5 + (i + 0.5) / N) / N);
  CHECK(L == Catch::Approx(s.value()).epsilon(1e-9));
}

TEST_CASE("arc length from the base point") {
  CurveModel circ;
  circ.a = 0.0;
  for (double v : {0.1, 0.25, -0.37, 0.5}) {
    CHECK(circ.arc_from_zero(v) == Catch::Approx(2.0 * M_PI * v).epsilon(1e-12));
  }
  CurveModel m;
  // The speed is even in v, so half the parameter range carries half the length.
  CHECK(m.arc_from_zero(0.5) == Catch::Approx(m.total_length() / 2.0).epsilon(1e-10));
  CHECK(m.arc_from_zero(-0.5) ==
        Catch::Approx(-m.total_length() / 2.0).epsilon(1e-10));
}

TEST_CASE("curve geodesic distance") {
  CurveModel m;
  CHECK(m.geodesic(0.3, 0.3) == 0.0);
  Rng rng(5);
  CurveModel circ;
  circ.a = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double v1 = rng.uniform() - 0.5;
    const double v2 = rng.uniform() - 0.5;
    const double gap = std::abs(v1 - v2);
    const double want = 2.0 * M_PI * std::min(gap, 1.0 - gap);
    CHECK(circ.geodesic(v1, v2) == Catch::Approx(want).margin(1e-10));
    // Symmetry and the chord bound.
    CHECK(m.geodesic(v1, v2) == Catch::Approx(m.geodesic(v2, v1)).margin(1e-12));
    const auto p = m.embed(v1);
    const auto q = m.embed(v2);
    const double chord = std::hypot(p[0] - q[0], p[1] - q[1]);
    CHECK(chord <= m.geodesic(v1, v2) + 1e-9);
  }
  for (int i = 0; i < 20; ++i) {
    const double v1 = rng.uniform() - 0.5;
    const double v2 = rng.uniform() - 0.5;
    const double v3 = rng.uniform() - 0.5;
    CHECK(m.geodesic(v1, v3) <= m.geodesic(v1, v2) + m.geodesic(v2, v3) + 1e-9);
  }
}

TEST_CASE("curve sampling is reproducible and supported correctly") {
  CurveModel m;
  m.lambda = 8.0;
  const auto c1 = m.sample(500, 42);
  const auto c2 = m.sample(500, 42);
  CHECK(c1.coords == c2.coords);
  CHECK(c1.x == c2.x);
  const auto c3 = m.sample(500, 43);
  CHECK(c1.coords != c3.coords);

  const auto vs = m.sample_params(500, 42);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    CHECK(std::abs(vs[i]) <= 0.5 / m.lambda);
    const auto p = m.embed(vs[i]);
    CHECK(p[0] == c1.coords[2 * i]);
    CHECK(p[1] == c1.coords[2 * i + 1]);
  }
}

TEST_CASE("unperturbed curve samples lie on the unit circle") {
  CurveModel circ;
  circ.a = 0.0;
  const auto c = circ.sample(2000, 9);
  for (std::size_t i = 0; i < 2000; ++i) {
    const double* p = c.point(i);
    CHECK(std::abs(p[0] * p[0] + p[1] * p[1] - 1.0) < 1e-12);
  }
}

TEST_CASE("curve parameter marginal matches its CDF") {
  CurveModel m;
  auto vs = m.sample_params(100000, 31);
  CHECK(ks_stat(vs, [](double v) { return gbeta_cdf(v, 2); }) < 0.01);
  CurveModel sharp;
  sharp.lambda = 8.0;
  auto ws = sharp.sample_params(100000, 31);
  for (auto& v : ws) v *= 8.0;  // unscale back to the base profile
  CHECK(ks_stat(ws, [](double v) { return gbeta_cdf(v, 2); }) < 0.01);
}

TEST_CASE("curve reach estimate") {
  CurveModel circ;
  circ.a = 0.0;
  // Every point-tangent ratio on a unit circle equals 1; the grid infimum
  // only picks up rounding from the chord/projection arithmetic.
  CHECK(circ.estimate_reach(512) == Catch::Approx(1.0).epsilon(1e-11));
  CurveModel m;
  const double tau = m.estimate_reach(2048);
  CHECK(tau == Catch::Approx(0.0178624).epsilon(1e-3));
  // Refinement can only tighten the infimum downward, and not by much.
  const double tau4 = m.estimate_reach(4096);
  CHECK(tau4 <= tau + 1e-12);
  CHECK(tau4 >= 0.98 * tau);
}

TEST_CASE("curve ground truth bundle") {
  CurveModel m;
  const auto gt = m.ground_truth();
  CHECK(gt.d == 1);
  CHECK(gt.f_at_x == Catch::Approx(0.12839390367077272).epsilon(1e-13));
  CHECK(gt.f_min == 0.0);
  CHECK(gt.f_max == Catch::Approx(0.8915694693).epsilon(1e-6));
  CHECK(gt.f_max >= gt.f_at_x);
  CHECK(gt.tau > 0.0);
  // Memoized reach: repeated calls agree bitwise.
  CHECK(m.ground_truth().tau == gt.tau);

  CurveModel sharp;
  sharp.lambda = 8.0;
  // Concentrating the parameter law scales the density at the query point
  // by exactly lambda (the speed there is unchanged). The sup grows less:
  // at lambda = 1 it already sits at the speed minimum outside the
  // shrunken support.
  CHECK(sharp.ground_truth().f_at_x ==
        Catch::Approx(8.0 * gt.f_at_x).epsilon(1e-12));
  CHECK(sharp.ground_truth().f_max >= gt.f_max);
  CHECK(sharp.ground_truth().tau == gt.tau);  // manifold unchanged by lambda
}

TEST_CASE("curve parameter validation") {
  CurveModel m;
  m.a = 0.2;
  m.w = 6;  // a*w = 1.2
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  CurveModel l;
  l.lambda = 0.5;
  CHECK_THROWS_AS(l.validate(), std::invalid_argument);
  CurveModel b;
  b.beta = 0;
  CHECK_THROWS_AS(b.validate(), std::invalid_argument);
  CurveModel d;
  d.D = 1;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("torus embedding reference points") {
  TorusModel m;  // a = 1/8, b = 3, w = 5
  const auto p = m.embed(0.0, 0.0);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == Catch::Approx(4.0).epsilon(1e-14));
  CHECK(p[1] == Catch::Approx(0.125).epsilon(1e-14));
  CHECK(p[2] == Catch::Approx(0.0).margin(1e-15));

  TorusModel plain;
  plain.a = 0.0;
  const auto q = plain.embed(0.0, 0.25);
  CHECK(q[0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(q[1] == Catch::Approx(4.0).epsilon(1e-14));
  CHECK(q[2] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("torus Jacobian at the base point") {
  TorusModel m;
  const auto J = m.jacobian(0.0, 0.0);
  const double c = 2.0 * M_PI;
  CHECK(J[0][0] == Catch::Approx(c * 0.625).epsilon(1e-14));
  CHECK(J[1][0] == Catch::Approx(0.0).margin(1e-14));
  CHECK(J[2][0] == Catch::Approx(c).epsilon(1e-14));
  CHECK(J[0][1] == Catch::Approx(0.0).margin(1e-14));
  CHECK(J[1][1] == Catch::Approx(c * 4.0).epsilon(1e-14));
  CHECK(J[2][1] == Catch::Approx(c * 0.625).epsilon(1e-14));
}

TEST_CASE("torus Jacobian matches central differences") {
  TorusModel m;
  Rng rng(17);
  const double h = 1e-6;
  for (int t = 0; t < 20; ++t) {
    const double v = rng.uniform() - 0.5;
    const double u = rng.uniform() - 0.5;
    const auto J = m.jacobian(v, u);
    const auto pv1 = m.embed(v + h, u), pv0 = m.embed(v - h, u);
    const auto pu1 = m.embed(v, u + h), pu0 = m.embed(v, u - h);
    for (int r = 0; r < 3; ++r) {
      CHECK(J[r][0] == Catch::Approx((pv1[r] - pv0[r]) / (2 * h)).margin(1e-6));
      CHECK(J[r][1] == Catch::Approx((pu1[r] - pu0[r]) / (2 * h)).margin(1e-6));
    }
  }
}

TEST_CASE("torus volume element") {
  TorusModel m;
  // Hand value at the base point: 4pi^2 sqrt(g11 g22 - g12^2) with
  // g11 = 1 + (aw)^2, g22 = (b+1)^2 + (aw)^2, g12 = aw.
  const double aw = 0.625;
  const double det =
      (1.0 + aw * aw) * (16.0 + aw * aw) - aw * aw;
  const double want = 4.0 * M_PI * M_PI * std::sqrt(det);
  CHECK(m.volume_element(0.0, 0.0) == Catch::Approx(want).epsilon(1e-13));
  CHECK(m.volume_element(0.0, 0.0) == Catch::Approx(186.8567675).epsilon(1e-8));

  TorusModel plain;
  plain.a = 0.0;
  Rng rng(23);
  for (int t = 0; t < 20; ++t) {
    const double v = rng.uniform() - 0.5;
    const double u = rng.uniform() - 0.5;
    // Surface of revolution: area element (2pi)^2 (b + cos 2piv).
    const double closed = 4.0 * M_PI * M_PI * (3.0 + std::cos(2.0 * M_PI * v));
    CHECK(plain.volume_element(v, u) == Catch::Approx(closed).epsilon(1e-12));
    // Perturbed model against a finite-difference Gram matrix.
    const double h = 1e-6;
    const auto pv1 = m.embed(v + h, u), pv0 = m.embed(v - h, u);
    const auto pu1 = m.embed(v, u + h), pu0 = m.embed(v, u - h);
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    for (int r = 0; r < 3; ++r) {
      const double dv = (pv1[r] - pv0[r]) / (2 * h);
      const double du = (pu1[r] - pu0[r]) / (2 * h);
      g11 += dv * dv;
      g12 += dv * du;
      g22 += du * du;
    }
    CHECK(m.volume_element(v, u) ==
          Catch::Approx(std::sqrt(g11 * g22 - g12 * g12)).epsilon(1e-6));
  }
}

TEST_CASE("torus density reference value and unit mass") {
  TorusModel m;
  const double C = 24.0 / 17.0;
  const double want = C * C / m.volume_element(0.0, 0.0);
  CHECK(m.density_at(0.0, 0.0) == Catch::Approx(want).epsilon(1e-14));
  CHECK(m.density_at(0.0, 0.0) == Catch::Approx(0.010666349477842967).epsilon(1e-12));

  // Mass over the surface: per-quadrant tensor Gauss-Legendre, splitting at
  // the profile kink so each factor is polynomial.
  const auto [nodes, weights] = gauss_legendre(32);
  auto mass_on = [&](double v0, double v1, double u0, double u1) {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double v = 0.5 * (v0 + v1) + 0.5 * (v1 - v0) * nodes[i];
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * nodes[j];
        s += weights[i] * weights[j] * m.density_at(v, u) * m.volume_element(v, u);
      }
    }
    return s * 0.25 * (v1 - v0) * (u1 - u0);
  };
  const double mass = mass_on(-0.5, 0.0, -0.5, 0.0) + mass_on(-0.5, 0.0, 0.0, 0.5) +
                      mass_on(0.0, 0.5, -0.5, 0.0) + mass_on(0.0, 0.5, 0.0, 0.5);
  CHECK(mass == Catch::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("torus sampling is reproducible and matches its marginals") {
  TorusModel m;
  const auto c1 = m.sample(400, 77);
  const auto c2 = m.sample(400, 77);
  CHECK(c1.coords == c2.coords);
  const auto vu = m.sample_params(100000, 13);
  std::vector<double> vs(vu.size()), us(vu.size());
  for (std::size_t i = 0; i < vu.size(); ++i) {
    vs[i] = vu[i][0];
    us[i] = vu[i][1];
  }
  CHECK(ks_stat(vs, [](double v) { return gbeta_cdf(v, 2); }) < 0.01);
  CHECK(ks_stat(us, [](double v) { return gbeta_cdf(v, 2); }) < 0.01);
}

TEST_CASE("torus ground truth bundle") {
  TorusModel m;
  const auto gt = m.ground_truth();
  CHECK(gt.d == 2);
  CHECK(gt.f_at_x == Catch::Approx(0.010666349477842967).epsilon(1e-12));
  CHECK(gt.f_max >= gt.f_at_x);
  CHECK(gt.tau > 0.0);
  CHECK(gt.tau < 1.5);
  CHECK(m.ground_truth().tau == gt.tau);
}

TEST_CASE("torus parameter validation") {
  TorusModel m;
  m.b = 1.2;  // violates b > 1 + 2a
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
  TorusModel l;
  l.lambda = 0.0;
  CHECK_THROWS_AS(l.validate(), std::invalid_argument);
  TorusModel d;
  d.D = 2;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}
