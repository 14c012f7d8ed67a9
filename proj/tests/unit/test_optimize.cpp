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

#include "catsim/hilbert.hpp"
#include "catsim/optimize.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace catsim;
using opt::Vec;

namespace {

// Exhaustive NNLS: unconstrained least squares on every support, keep the
// best feasible solution.
Vec nnls_brute(const Eigen::MatrixXd& A, const Vec& b) {
  const int n = static_cast<int>(A.cols());
  Vec best = Vec::Zero(n);
  double best_r = b.norm();
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (mask & (1 << j)) idx.push_back(j);
    Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Vec z = sub.colPivHouseholderQr().solve(b);
    if (z.minCoeff() < 0.0) continue;
    Vec x = Vec::Zero(n);
    for (size_t k = 0; k < idx.size(); ++k) x(idx[k]) = z(static_cast<Eigen::Index>(k));
    const double r = (A * x - b).norm();
    if (r < best_r) {
      best_r = r;
      best = x;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("non-negative least squares agrees with exhaustive search") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 9;
    const int n = 5;
    Eigen::MatrixXd A(m, n);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
      b(i) = nd(rng);
      for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
    }
    const Vec x = opt::nnls(A, b);
    const Vec ref = nnls_brute(A, b);
    CHECK(x.minCoeff() >= 0.0);
    CHECK((A * x - b).norm() == doctest::Approx((A * ref - b).norm()).epsilon(1e-9));
    CHECK((x - ref).norm() < 1e-8);
  }
  CHECK_THROWS_AS(opt::nnls(Eigen::MatrixXd::Identity(3, 3), Vec::Zero(2)), DimensionError);
}

TEST_CASE("Levenberg-Marquardt fits an exponential") {
  std::vector<double> t, y;
  for (int i = 0; i < 30; ++i) {
    t.push_back(0.2 * i);
    y.push_back(2.5 * std::exp(-0.7 * t.back()) + 0.1);
  }
  auto res = [&](const Vec& p, Vec& r) {
    for (size_t i = 0; i < t.size(); ++i) r(static_cast<Eigen::Index>(i)) = p(0) * std::exp(-p(1) * t[i]) + p(2) - y[i];
  };
  Vec p0(3);
  p0 << 1.0, 0.3, 0.0;
  const opt::LsqResult r = opt::levenberg_marquardt(res, p0, static_cast<int>(t.size()));
  CHECK(r.params(0) == doctest::Approx(2.5).epsilon(1e-6));
  CHECK(r.params(1) == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(r.params(2) == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(r.residual_norm < 1e-8);
}

TEST_CASE("Nelder-Mead and multi-start") {
  auto rosen = [](const Vec& x) { return 100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2); };
  Vec x0(2);
  x0 << -1.2, 1.0;
  Vec step(2);
  step << 0.2, 0.2;
  const opt::MinimizeResult r = opt::nelder_mead(rosen, x0, step, 1e-10, 20000);
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-4));

  auto two_wells = [](const Vec& x) { return std::min(std::pow(x(0) - 2.0, 2), std::pow(x(0) + 2.0, 2) - 0.5); };
  Vec a(1), b(1), s(1);
  a << 1.5;
  b << -1.0;
  s << 0.1;
  const opt::MinimizeResult m = opt::multi_start(two_wells, {a, b}, s, 1e-10);
  CHECK(m.x(0) == doctest::Approx(-2.0).epsilon(1e-4));
  CHECK(m.value == doctest::Approx(-0.5).epsilon(1e-8));
}

TEST_CASE("scalar minimization and crossing") {
  const opt::ScalarResult r = opt::brent_minimize([](double x) { return std::cos(x); }, 2.0, 4.0);
  CHECK(r.x == doctest::Approx(M_PI).epsilon(1e-8));
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-12));

  const double c = opt::bisect_crossing([](double x) { return 1.0 - x * x; }, 0.0, 2.0, 0.5, 1e-12);
  CHECK(c == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
}
