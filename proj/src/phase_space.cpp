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

#include "catsim/phase_space.hpp"

#include "catsim/optimize.hpp"
#include "catsim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catsim {

namespace {

constexpr double kTwoOverPi = 2.0 / std::numbers::pi;

double trapz_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

template <typename F>
double grid_sum(const WignerGrid& g, F&& f) {
  if (g.values.empty() || g.values.size() != g.points.size()) {
    throw std::invalid_argument("WignerGrid: no values to integrate");
  }
  double s = 0.0;
  switch (g.layout) {
    case GridLayout::slice:
      if (g.values.size() < 2) throw std::invalid_argument("WignerGrid: slice needs >= 2 points");
      for (int i = 0; i < g.nx; ++i) s += trapz_weight(i, g.nx) * f(g.values[static_cast<size_t>(i)]);
      return s * g.dx;
    case GridLayout::raster:
      if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("WignerGrid: raster needs >= 2x2 points");
      for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
          s += trapz_weight(ix, g.nx) * trapz_weight(iy, g.ny) *
               f(g.values[static_cast<size_t>(iy * g.nx + ix)]);
      return s * g.dx * g.dy;
    case GridLayout::scattered:
      break;
  }
  throw std::invalid_argument("WignerGrid: scattered points cannot be integrated");
}

}  // namespace

WignerGrid WignerGrid::raster(double re_min, double re_max, int nx, double im_min, double im_max, int ny) {
  if (nx < 2 || ny < 2 || !(re_max > re_min) || !(im_max > im_min)) {
    throw std::invalid_argument("WignerGrid::raster: need nx, ny >= 2 and increasing bounds");
  }
  WignerGrid g;
  g.layout = GridLayout::raster;
  g.nx = nx;
  g.ny = ny;
  g.dx = (re_max - re_min) / (nx - 1);
  g.dy = (im_max - im_min) / (ny - 1);
  g.points.reserve(static_cast<size_t>(nx) * static_cast<size_t>(ny));
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) g.points.emplace_back(re_min + g.dx * ix, im_min + g.dy * iy);
  return g;
}

WignerGrid WignerGrid::slice(cplx start, cplx stop, int count) {
  if (count < 2 || start == stop) throw std::invalid_argument("WignerGrid::slice: need >= 2 distinct points");
  WignerGrid g;
  g.layout = GridLayout::slice;
  g.nx = count;
  g.ny = 1;
  g.dx = std::abs(stop - start) / (count - 1);
  for (int i = 0; i < count; ++i) {
    g.points.push_back(start + (stop - start) * (static_cast<double>(i) / (count - 1)));
  }
  return g;
}

WignerGrid WignerGrid::scattered(std::vector<cplx> pts) {
  WignerGrid g;
  g.layout = GridLayout::scattered;
  g.nx = static_cast<int>(pts.size());
  g.ny = 1;
  g.points = std::move(pts);
  return g;
}

WignerGrid WignerGrid::default_raster() { return raster(-3.5, 3.5, 81, -3.5, 3.5, 81); }
WignerGrid WignerGrid::default_slice() { return slice({-3.5, 0.0}, {3.5, 0.0}, 101); }

int WignerGrid::flagged_count() const {
  return static_cast<int>(std::count(flagged.begin(), flagged.end(), true));
}

double wigner_value(const CMat& rho, cplx beta) {
  const int d = static_cast<int>(rho.rows());
  const CMat p = displaced_parity(beta, d);
  // Tr(rho P) = sum_ij rho_ij P_ji
  return kTwoOverPi * (rho.transpose().cwiseProduct(p)).sum().real();
}

WignerGrid wigner(const CMat& rho, WignerGrid grid) {
  if (rho.rows() != rho.cols() || rho.rows() < 2) throw DimensionError("wigner: bad density matrix");
  const double n_max = static_cast<double>(rho.rows() - 1);
  const double radius = std::sqrt(n_max) / 2.0;
  grid.values.assign(grid.points.size(), 0.0);
  grid.flagged.assign(grid.points.size(), false);
  const CMat r = hermitize(rho);
  parallel_for(grid.points.size(), [&](size_t k) {
    grid.values[k] = wigner_value(r, grid.points[k]);
  });
  for (size_t k = 0; k < grid.points.size(); ++k) grid.flagged[k] = std::abs(grid.points[k]) > radius;
  return grid;
}

WignerGrid wigner(const JointState& phonon_state, WignerGrid grid) {
  if (phonon_state.space().has_qubit()) {
    throw DimensionError("wigner: expects a phonon-only state (trace out the qubit first)");
  }
  return wigner(phonon_state.density(), std::move(grid));
}

double integrate(const WignerGrid& grid) {
  return grid_sum(grid, [](double w) { return w; });
}

double negativity(const WignerGrid& grid) {
  const double v = grid_sum(grid, [](double w) { return std::abs(w) - w; });
  return v < 1e-12 ? 0.0 : v;
}

double decayed_css_wigner_value(cplx alpha, double eps, cplx beta, double vartheta) {
  const double a2 = std::norm(alpha);
  const double xi = std::exp(-2.0 * a2 * (1.0 - eps * eps));
  const cplx ae = alpha * eps;
  const double norm = std::numbers::pi * (1.0 + std::cos(vartheta) * std::exp(-2.0 * a2));
  const double fringe = std::cos(4.0 * (std::conj(alpha) * beta).imag() * eps + vartheta);
  return (std::exp(-2.0 * std::norm(beta - ae)) + std::exp(-2.0 * std::norm(beta + ae)) +
          2.0 * xi * std::exp(-2.0 * std::norm(beta)) * fringe) /
         norm;
}

WignerGrid decayed_css_wigner(cplx alpha, double kappa, double t, WignerGrid grid, double vartheta) {
  if (kappa < 0.0 || t < 0.0) throw std::invalid_argument("decayed_css_wigner: kappa and t must be >= 0");
  const double eps = std::exp(-0.5 * kappa * t);
  grid.values.resize(grid.points.size());
  grid.flagged.assign(grid.points.size(), false);
  for (size_t k = 0; k < grid.points.size(); ++k) {
    grid.values[k] = decayed_css_wigner_value(alpha, eps, grid.points[k], vartheta);
  }
  return grid;
}

NegativityDecayFit fit_negativity_decay(const std::vector<double>& taus, const std::vector<double>& deltas) {
  const size_t m = taus.size();
  if (m < 4 || deltas.size() != m) {
    throw std::invalid_argument("fit_negativity_decay: need >= 4 matching (tau, delta) points");
  }
  for (double d : deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("fit_negativity_decay: deltas must be >= 0");
  }
  const auto [mn, mx] = std::minmax_element(deltas.begin(), deltas.end());
  if (*mx - *mn <= 1e-12 * std::max(1.0, *mx)) {
    throw NumericalError("fit_negativity_decay: constant series, decay time undetermined");
  }
  const double span = *std::max_element(taus.begin(), taus.end()) - *std::min_element(taus.begin(), taus.end());
  if (!(span > 0.0)) throw NumericalError("fit_negativity_decay: all wait times coincide");

  // Variable projection seed: for fixed tau the model is linear in (A, c).
  auto linear_fit = [&](double tau, double& a, double& c) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(m), 2);
    Eigen::VectorXd y(static_cast<Eigen::Index>(m));
    for (size_t k = 0; k < m; ++k) {
      X(static_cast<Eigen::Index>(k), 0) = std::exp(-taus[k] / tau);
      X(static_cast<Eigen::Index>(k), 1) = 1.0;
      y(static_cast<Eigen::Index>(k)) = deltas[k];
    }
    const Eigen::VectorXd p = X.colPivHouseholderQr().solve(y);
    a = p(0);
    c = p(1);
    return (X * p - y).squaredNorm();
  };
  double best_tau = span, best_a = 0.0, best_c = 0.0, best_r = INFINITY;
  const int n_grid = 400;
  for (int k = 0; k < n_grid; ++k) {
    const double tau = span * std::pow(10.0, -2.0 + 4.0 * k / (n_grid - 1));
    double a, c;
    const double r = linear_fit(tau, a, c);
    if (r < best_r) {
      best_r = r;
      best_tau = tau;
      best_a = a;
      best_c = c;
    }
  }
  auto resid = [&](const opt::Vec& p, opt::Vec& r) {
    for (size_t k = 0; k < m; ++k) {
      r(static_cast<Eigen::Index>(k)) = p(0) * std::exp(-taus[k] / p(1)) + p(2) - deltas[k];
    }
  };
  opt::Vec p0(3);
  p0 << best_a, best_tau, best_c;
  const opt::LsqResult fit = opt::levenberg_marquardt(resid, p0, static_cast<int>(m), 1e-14);
  opt::Vec p = fit.params;
  if (!p.allFinite() || !(p(1) > 0.0)) throw NumericalError("fit_negativity_decay: fit diverged");
  NegativityDecayFit out;
  out.amplitude = p(0);
  out.tau_cat = p(1);
  out.offset = p(2);
  out.residual = fit.residual_norm / std::sqrt(static_cast<double>(m));
  return out;
}

double tau_cat_large_alpha(cplx alpha, double t1_phonon) {
  const double a2 = std::norm(alpha);
  if (a2 == 0.0) throw std::invalid_argument("tau_cat_large_alpha: alpha must be non-zero");
  return t1_phonon / (2.0 * a2);
}

NegativitySweep analytic_negativity_sweep(cplx alpha, double t1_phonon, double vartheta,
                                          const std::vector<double>& taus, const WignerGrid& grid) {
  NegativitySweep sweep;
  sweep.taus = taus;
  const double kappa = 1.0 / t1_phonon;
  for (double t : taus) {
    sweep.deltas.push_back(negativity(decayed_css_wigner(alpha, kappa, t, grid, vartheta)));
  }
  sweep.fit = fit_negativity_decay(sweep.taus, sweep.deltas);
  return sweep;
}

}  // namespace catsim
