// Copyright 2026 The catsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "catsim/dynamics.hpp"
#include "catsim/phase_space.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace catsim;

namespace {

constexpr double kPi = std::numbers::pi;

CMat css_density(cplx alpha, double vartheta, int dim) {
  CVec v = coherent_amplitudes(alpha, dim) + std::polar(1.0, vartheta) * coherent_amplitudes(-alpha, dim);
  v /= v.norm();
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("Wigner values of reference states") {
  const HilbertSpace sp(30, false);
  CHECK(wigner_value(fock_state(0, sp).density(), 0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-14));
  CHECK(wigner_value(fock_state(1, sp).density(), 0.0) == doctest::Approx(-2.0 / kPi).epsilon(1e-14));
  const cplx a(0.8, -0.6);
  const CMat rho = coherent_state(a, sp).density();
  CHECK(wigner_value(rho, a) == doctest::Approx(2.0 / kPi).epsilon(1e-10));
  for (cplx b : {cplx(0.3, 0.1), cplx(-0.5, 0.7), cplx(1.2, -1.0)}) {
    CHECK(std::abs(wigner_value(rho, b) - 2.0 / kPi * std::exp(-2.0 * std::norm(b - a))) < 1e-10);
    // The trace is real to rounding.
    const CMat p = displaced_parity(b, 31);
    CHECK(std::abs((rho.transpose().cwiseProduct(p)).sum().imag()) < 1e-10);
  }
}

TEST_CASE("grid construction and flagging") {
  const WignerGrid g = WignerGrid::default_raster();
  CHECK(g.nx == 81);
  CHECK(g.ny == 81);
  CHECK(std::abs(g.points[1] - g.points[0] - cplx(g.dx, 0.0)) < 1e-14);
  CHECK(std::abs(g.points[81] - g.points[0] - cplx(0.0, g.dy)) < 1e-14);
  CHECK(WignerGrid::default_slice().size() == 101);
  const WignerGrid w = wigner(fock_state(0, HilbertSpace(16, false)), WignerGrid::default_raster());
  CHECK(w.flagged_count() > 0);  // radius sqrt(16)/2 = 2 < 3.5
  const WignerGrid ok = wigner(fock_state(0, HilbertSpace(49, false)), WignerGrid::default_raster());
  int expect = 0;
  for (cplx p : ok.points) expect += std::abs(p) > 3.5;
  CHECK(ok.flagged_count() == expect);
  CHECK_THROWS_AS(wigner(fock_state(0, HilbertSpace(4, true)), WignerGrid::default_slice()), DimensionError);
  CHECK_THROWS_AS(integrate(WignerGrid::scattered({0.0, 1.0})), std::invalid_argument);
}

TEST_CASE("normalization on full-coverage grids") {
  const HilbertSpace sp(40, false);
  const std::vector<CMat> states = {fock_state(0, sp).density(), fock_state(3, sp).density(),
                                    coherent_state(cplx(1.0, 0.5), sp).density(), css_density(1.6, 0.0, 41),
                                    testing::random_density(8, 3, 5)};
  for (const CMat& r : states) {
    CHECK(std::abs(integrate(wigner(r, WignerGrid::default_raster())) - 1.0) < 0.02);
  }
}

TEST_CASE("negativity") {
  const HilbertSpace sp(40, false);
  CHECK(negativity(wigner(coherent_state(cplx(0.7, -0.3), sp), WignerGrid::default_raster())) == 0.0);
  SUBCASE("Fock 1 against adaptive quadrature of the closed form") {
    using boost::math::quadrature::gauss_kronrod;
    // W1 = (2/pi)(4r^2 - 1) exp(-2 r^2); negative for r < 1/2.
    const double neg = gauss_kronrod<double, 61>::integrate(
        [](double r) { return 2.0 * kPi * r * (2.0 / kPi) * (1.0 - 4.0 * r * r) * std::exp(-2.0 * r * r); }, 0.0,
        0.5, 15, 1e-14);
    const double oracle = 2.0 * neg;
    const double num = negativity(wigner(fock_state(1, sp), WignerGrid::default_raster()));
    CHECK(std::abs(num - oracle) / oracle < 0.01);
  }
  SUBCASE("cat slice through the fringes matches the closed form") {
    const cplx a(0.0, 1.43);
    const WignerGrid num = wigner(css_density(a, 0.0, 41), WignerGrid::default_slice());
    using boost::math::quadrature::gauss_kronrod;
    const double oracle = gauss_kronrod<double, 61>::integrate(
        [&](double x) {
          const double w = decayed_css_wigner_value(a, 1.0, cplx(x, 0.0));
          return std::abs(w) - w;
        },
        -3.5, 3.5, 20, 1e-12);
    CHECK(std::abs(negativity(num) - oracle) / oracle < 0.01);
    const WignerGrid ana = decayed_css_wigner(a, 0.0, 0.0, WignerGrid::default_slice());
    CHECK(std::abs(negativity(num) - negativity(ana)) < 1e-6);
  }
  CHECK_THROWS_AS(negativity(WignerGrid::default_slice()), std::invalid_argument);
}

TEST_CASE("Wigner linearity and displacement covariance") {
  const CMat a = testing::random_density(12, 2, 1);
  const CMat b = testing::random_density(12, 3, 2);
  const WignerGrid g = WignerGrid::raster(-2.0, 2.0, 9, -2.0, 2.0, 9);
  const WignerGrid wa = wigner(a, g), wb = wigner(b, g), wm = wigner(0.3 * a + 0.7 * b, g);
  for (size_t k = 0; k < g.size(); ++k) CHECK(std::abs(wm.values[k] - 0.3 * wa.values[k] - 0.7 * wb.values[k]) < 1e-10);

  const int dim = 40, big = 120;
  const cplx gamma(0.3, 0.2);
  const CMat rho = 0.6 * embed(coherent_state(cplx(0.5, -0.4), HilbertSpace(dim - 1, false)).density(), big) +
                   0.4 * embed(testing::random_density(6, 2, 9), big);
  const CMat D = displacement_elements(gamma, big);
  const CMat shifted = (D * rho * D.adjoint()).topLeftCorner(dim, dim);
  const CMat base = rho.topLeftCorner(dim, dim);
  for (cplx beta : {cplx(0.1, 0.0), cplx(0.6, -0.3), cplx(-0.4, 0.5)}) {
    CHECK(std::abs(wigner_value(shifted, beta) - wigner_value(base, beta - gamma)) < 1e-8);
  }
}

TEST_CASE("decayed cat Wigner function") {
  SUBCASE("undecayed form equals the numeric Wigner of the cat") {
    for (double a : {1.0, 2.0, 3.0}) {
      for (double vt : {0.0, kPi / 2.0}) {
        const WignerGrid num = wigner(css_density(a, vt, 80), WignerGrid::default_raster());
        const WignerGrid ana = decayed_css_wigner(a, 0.0, 0.0, WignerGrid::default_raster(), vt);
        double worst = 0.0;
        for (size_t k = 0; k < num.size(); ++k) worst = std::max(worst, std::abs(num.values[k] - ana.values[k]));
        CHECK(worst < 1e-6);
      }
    }
  }
  SUBCASE("full relaxation gives vacuum") {
    const double eps = 1e-9;
    for (cplx b : {cplx(0.0), cplx(0.4, 0.3), cplx(-1.0, 0.2)}) {
      CHECK(std::abs(decayed_css_wigner_value(2.0, eps, b) - 2.0 / kPi * std::exp(-2.0 * std::norm(b))) < 1e-6);
    }
  }
  SUBCASE("coherence factor") {
    const double a = 2.0, eps = std::sqrt(0.5);
    const double gauss = 2.0 * std::exp(-2.0 * a * a * eps * eps);
    const double w0 = decayed_css_wigner_value(a, eps, 0.0) * kPi * (1.0 + std::exp(-2.0 * a * a));
    CHECK((w0 - gauss) / 2.0 == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
  }
  SUBCASE("negativity does not increase with time") {
    for (double a : {0.8, 1.5, 2.5}) {
      double prev = INFINITY;
      for (double t : linspace(0.0, 60.0, 13)) {
        const double n = negativity(decayed_css_wigner(a, 1.0 / 84.0, t, WignerGrid::default_raster()));
        CHECK(n <= prev + 1e-12);
        prev = n;
      }
    }
  }
}

TEST_CASE("negativity decay fits") {
  SUBCASE("noiseless round trip") {
    const auto t = linspace(0.0, 35.0, 8);
    std::vector<double> d;
    for (double x : t) d.push_back(3.0 * std::exp(-x / 12.34) + 0.1);
    const NegativityDecayFit f = fit_negativity_decay(t, d);
    CHECK(std::abs(f.tau_cat - 12.34) < 1e-6);
    CHECK(std::abs(f.amplitude - 3.0) < 1e-6);
    CHECK(std::abs(f.offset - 0.1) < 1e-6);
  }
  CHECK_THROWS_AS(fit_negativity_decay({0, 1, 2, 3}, {0.5, 0.5, 0.5, 0.5}), NumericalError);
  CHECK_THROWS_AS(fit_negativity_decay({0, 1, 2}, {0.5, 0.4, 0.3}), std::invalid_argument);
  CHECK(tau_cat_large_alpha(1.61, 84.0) == doctest::Approx(16.2029).epsilon(1e-4));
  CHECK(tau_cat_large_alpha(3.22, 84.0) == doctest::Approx(tau_cat_large_alpha(1.61, 84.0) / 4.0));
  CHECK_THROWS_AS(tau_cat_large_alpha(0.0, 84.0), std::invalid_argument);

  SUBCASE("large-alpha law and small-alpha phase dependence") {
    const auto taus = linspace(0.0, 40.0, 41);
    const NegativitySweep s = analytic_negativity_sweep(2.5, 84.0, 0.0, taus, WignerGrid::default_raster());
    CHECK(std::abs(s.fit.tau_cat - 6.72) / 6.72 < 0.10);
    std::vector<double> t3;
    for (double vt : {0.0, kPi / 2.0, kPi}) {
      t3.push_back(analytic_negativity_sweep(0.8, 84.0, vt, taus, WignerGrid::default_raster()).fit.tau_cat);
    }
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = i + 1; j < 3; ++j) CHECK(std::abs(t3[i] - t3[j]) / std::min(t3[i], t3[j]) > 0.05);
  }
}
