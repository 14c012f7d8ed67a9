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
#include "catsim/tomography.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace catsim;

namespace {

JointState cat_state(double a, int big = 40) {
  CVec v = coherent_amplitudes(cplx(0.0, a), big) + coherent_amplitudes(cplx(0.0, -a), big);
  v /= v.norm();
  return JointState::pure(HilbertSpace(big - 1, false), v);
}

double binomial_sigma(double mean, int shots) {
  const double p = 0.5 * (1.0 + mean);
  return 2.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / shots);
}

}  // namespace

TEST_CASE("parity readout simulation") {
  const HilbertSpace sp(30, false);
  ReadoutModel ideal;
  ideal.shots = 500;
  CHECK(simulate_parity_readout(fock_state(0, sp), 0.0, ideal) == 1.0);
  CHECK(simulate_parity_readout(fock_state(1, sp), 0.0, ideal) == -1.0);

  SUBCASE("reduced contrast follows binomial statistics") {
    ReadoutModel m;
    m.contrast = 0.8;
    m.shots = 10000;
    m.seed = 11;
    const JointState s = coherent_state(cplx(0.4, 0.2), sp);
    std::uint64_t idx = 0;
    for (cplx b : {cplx(0.0), cplx(0.3, -0.1), cplx(0.6, 0.4), cplx(-0.5, 0.2)}) {
      const double expect = 0.8 * expected_parity(s.density(), b);
      CHECK(std::abs(simulate_parity_readout(s, b, m, idx++) - expect) < 3.0 * binomial_sigma(expect, m.shots));
    }
  }
  SUBCASE("inconsistent model is rejected") {
    ReadoutModel m;
    m.offset = 0.5;
    CHECK_THROWS_AS(simulate_parity_readout(fock_state(0, sp), 0.0, m), std::invalid_argument);
    m.offset = 0.0;
    m.contrast = 1.5;
    CHECK_THROWS_AS(simulate_parity_readout(fock_state(0, sp), 0.0, m), std::invalid_argument);
  }
  SUBCASE("identical seeds give identical samples") {
    ReadoutModel m;
    m.shots = 300;
    m.seed = 42;
    const JointState s = cat_state(1.2);
    const auto grid = square_grid(2.0, 7);
    const WignerSampleSet a = sample_wigner(s, grid, m, {});
    const WignerSampleSet b = sample_wigner(s, grid, m, {});
    CHECK(a.measured_parities == b.measured_parities);
    m.seed = 43;
    CHECK(sample_wigner(s, grid, m, {}).measured_parities != a.measured_parities);
  }
  SUBCASE("readout decay shrinks the parity toward zero") {
    const CMat r = fock_state(1, sp).density();
    CHECK(expected_parity(r, 0.0, 0.0) == doctest::Approx(-1.0));
    const double lam = 1.0 - 2.0 * std::exp(-0.2);
    CHECK(expected_parity(r, 0.0, 0.2) == doctest::Approx(lam).epsilon(1e-12));
  }
}

TEST_CASE("parity normalization") {
  ReadoutModel ideal;
  const ParityNormalization n = calibrate_parity(ideal, 32, true);
  CHECK(n.amplitude == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(n.offset) < 1e-12);

  ReadoutModel m;
  m.contrast = 0.7;
  m.shots = 10000;
  m.seed = 5;
  const ParityNormalization c = calibrate_parity(m);
  CHECK(std::abs((1.0 / c.amplitude) / (1.0 / 0.7) - 1.0) < 0.02);

  const HilbertSpace sp(30, false);
  for (double contrast : {0.5, 0.7, 0.9, 1.0}) {
    ReadoutModel r;
    r.contrast = contrast;
    r.offset = 0.05 * (1.0 - contrast);
    r.shots = 10000;
    r.seed = 99;
    const ParityNormalization cal = calibrate_parity(r);
    const double v = cal.apply(simulate_parity_readout(fock_state(0, sp), 0.0, r));
    CHECK(v > 0.97);
  }

  SUBCASE("normalized readout recovers the true parity") {
    ReadoutModel r;
    r.contrast = 0.75;
    r.offset = 0.03;
    r.shots = 10000;
    r.seed = 123;
    const ParityNormalization cal = calibrate_parity(r);
    const JointState s = cat_state(1.1);
    const auto grid = square_grid(1.5, 5);
    const WignerSampleSet set = sample_wigner(s, grid, r, cal);
    for (size_t k = 0; k < grid.size(); ++k) {
      const double truth = expected_parity(s.density(), grid[k]);
      const double sig = binomial_sigma(0.75 * truth + 0.03, r.shots) / 0.75;
      CHECK(std::abs(set.measured_parities[k] - truth) < 4.0 * sig + 0.02);
    }
  }
  ParityNormalization bad;
  bad.amplitude = 2.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("drive calibration") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  std::vector<std::pair<double, double>> s;
  for (double a : linspace(0.05, 0.5, 10)) s.emplace_back(a, 0.9 * std::expm1(a / 0.5) * (1.0 + 0.01 * nd(rng)));
  const DriveCalibration c = calibrate_drive(s);
  CHECK(std::abs(c.B / 0.5 - 1.0) < 0.05);
  CHECK(std::abs(c.C / 0.9 - 1.0) < 0.05);
  CHECK_FALSE(c.nonmonotone_warning);
  const double h = 1e-7;
  CHECK((c.beta_abs(h) - c.beta_abs(0.0)) / h == doctest::Approx(c.slope_at_zero()).epsilon(1e-5));
  CHECK(c.beta_abs(0.0) == 0.0);
  double prev = -1.0;
  for (double a : linspace(0.0, 1.0, 50)) {
    CHECK(c.beta_abs(a) > prev);
    prev = c.beta_abs(a);
  }
  auto rolled_off = s;
  for (size_t k = 7; k < rolled_off.size(); ++k) rolled_off[k].second = rolled_off[k - 1].second * 0.85;
  CHECK(calibrate_drive(rolled_off).nonmonotone_warning);
  auto dipped = s;
  dipped[5].second *= 0.5;
  CHECK(calibrate_drive(dipped).nonmonotone_warning);
  CHECK_THROWS_AS(calibrate_drive({{0.1, 0.2}, {0.2, 0.4}}), std::invalid_argument);
}

TEST_CASE("Fock population extraction") {
  const double g0 = std::sqrt(2.0) / 0.9;
  const auto times = linspace(0.0, 12.0, 241);
  auto poisson = [](double a, int n_max) {
    std::vector<double> p;
    double t = std::exp(-a * a);
    for (int n = 0; n <= n_max; ++n) {
      if (n > 0) t *= a * a / n;
      p.push_back(t);
    }
    return p;
  };
  SUBCASE("coherent alpha = 1") {
    const FockFit f = extract_fock_populations(times, fock_rabi_trace(poisson(1.0, 14), g0, 0.2, times), g0, 10);
    CHECK(std::abs(f.populations[1] - std::exp(-1.0)) < 0.02);
    CHECK(std::abs(f.beta_abs - 1.0) < 0.02);
  }
  SUBCASE("vacuum") {
    const FockFit f = extract_fock_populations(times, fock_rabi_trace({1.0}, g0, 0.1, times), g0, 8);
    CHECK(std::abs(f.populations[0] - 1.0) < 0.01);
  }
  SUBCASE("noisy coherent alpha = 1.3") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd(0.0, 0.01);
    auto pe = fock_rabi_trace(poisson(1.3, 16), g0, 0.2, times);
    for (double& v : pe) v += nd(rng);
    const FockFit f = extract_fock_populations(times, pe, g0, 10);
    CHECK(std::abs(f.beta_abs / 1.3 - 1.0) < 0.05);
  }
  SUBCASE("noiseless finite support is fitted exactly") {
    const std::vector<double> p = {0.5, 0.3, 0.2};
    const FockFit f = extract_fock_populations(times, fock_rabi_trace(p, g0, 0.15, times), g0, 6);
    CHECK(f.residual < 1e-6);
    CHECK(std::abs(f.gamma_d - 0.15) < 1e-4);
  }
  SUBCASE("short trace is rejected") {
    const auto short_t = linspace(0.0, 2.0, 60);
    CHECK_THROWS_AS(extract_fock_populations(short_t, fock_rabi_trace({1.0}, g0, 0.1, short_t), g0, 4),
                    NumericalError);
  }
}

TEST_CASE("maximum-likelihood reconstruction") {
  const JointState truth = cat_state(1.4);
  const auto grid = square_grid(2.0, 9);
  SUBCASE("round trip at 1e4 shots with monotone likelihood") {
    ReadoutModel m;
    m.shots = 10000;
    m.seed = 2;
    const MleResult r = mle_reconstruct(sample_wigner(truth, grid, m, {}), HilbertSpace(9, false));
    CHECK(r.converged);
    CHECK(fidelity(embed(r.state.density(), 40), truth.density()) > 0.99);
    for (size_t k = 1; k < r.log_likelihood.size(); ++k) CHECK(r.log_likelihood[k] >= r.log_likelihood[k - 1]);
    const CMat d = r.state.density();
    CHECK(std::abs(d.trace() - 1.0) < 1e-9);
    CHECK((d - d.adjoint()).norm() < 1e-12);
    CHECK(min_eigenvalue(d) > -1e-9);
  }
  SUBCASE("vacuum reconstruction from exact parities is pure") {
    const CMat vac = fock_state(0, HilbertSpace(20, false)).density();
    WignerSampleSet s;
    s.betas = grid;
    s.shots_per_point = 10000;
    for (cplx b : grid) s.measured_parities.push_back(expected_parity(vac, b));
    const MleResult r = mle_reconstruct(s, HilbertSpace(6, false));
    CHECK(r.converged);
    CHECK(purity(r.state) > 0.999);
  }
  SUBCASE("error shrinks with more shots") {
    std::vector<double> err;
    for (int shots : {100, 1000, 10000}) {
      double e = 0.0;
      for (std::uint64_t seed : {1, 2}) {
        ReadoutModel m;
        m.shots = shots;
        m.seed = seed;
        const MleResult r = mle_reconstruct(sample_wigner(truth, grid, m, {}), HilbertSpace(9, false));
        e += 1.0 - fidelity(embed(r.state.density(), 40), truth.density());
      }
      err.push_back(e);
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
  }
  SUBCASE("input validation") {
    ReadoutModel m;
    WignerSampleSet s = sample_wigner(truth, grid, m, {});
    CHECK_THROWS_AS(mle_reconstruct(s, HilbertSpace(5, true)), DimensionError);
    s.normalization.amplitude = 3.0;
    CHECK_THROWS_AS(mle_reconstruct(s, HilbertSpace(5, false)), std::invalid_argument);
  }
}
