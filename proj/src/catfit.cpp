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

#include "catsim/catfit.hpp"

#include "catsim/dynamics.hpp"
#include "catsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace catsim {

namespace {

constexpr double kPi = std::numbers::pi;

// Targets are built on a basis large enough for their own support and then
// restricted to the rows of the state being fitted, so that a reconstruction
// on a small cutoff is compared with the untruncated target.
int target_dim(double abs_alpha, int dim) { return std::max(dim, recommended_n_max(abs_alpha) + 2); }

CMat restricted_phonon(const JointState& rho) {
  if (rho.space().has_qubit()) throw DimensionError("cat fits expect a phonon-only state");
  return rho.density();
}

cplx mean_a(const CMat& rho) {
  cplx s = 0.0;
  for (Eigen::Index n = 1; n < rho.rows(); ++n) s += std::sqrt(static_cast<double>(n)) * rho(n, n - 1);
  return s;
}

double mean_n(const CMat& rho) {
  double s = 0.0;
  for (Eigen::Index n = 0; n < rho.rows(); ++n) s += static_cast<double>(n) * rho(n, n).real();
  return s;
}

}  // namespace

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

CMat analytical_target_factor(double alpha, double theta, const AnalyticalTargetSpec& spec, int dim) {
  const int big = target_dim(std::abs(alpha), dim);
  const JcBranches b = jc_branches_unchecked(std::abs(alpha), spec.c_g, spec.c_e, spec.g0, spec.t_C, big);
  CMat v(dim, 2);
  for (int n = 0; n < dim; ++n) {
    const cplx ph = std::polar(1.0, -theta * n);
    v(n, 0) = ph * b.psi_g(n);
    v(n, 1) = ph * b.psi_e(n);
  }
  return v;
}

CVec css_vector(cplx alpha1, cplx alpha2, double vartheta, int dim) {
  const int big = target_dim(std::max(std::abs(alpha1), std::abs(alpha2)), dim);
  CVec v = coherent_amplitudes(alpha1, big) + std::polar(1.0, vartheta) * coherent_amplitudes(alpha2, big);
  const double nrm = v.norm();
  if (!(nrm > 1e-300)) return CVec::Zero(dim);
  return v.head(dim) / nrm;
}

AnalyticalFit fit_analytical(const JointState& rho_state, const AnalyticalTargetSpec& spec) {
  const CMat rho = restricted_phonon(rho_state);
  const int dim = static_cast<int>(rho.rows());
  auto objective = [&](const opt::Vec& p) {
    return -fidelity_low_rank(rho, analytical_target_factor(p(0), p(1), spec, dim));
  };
  const double base = std::max(0.3, std::sqrt(std::max(mean_n(rho), 0.0)));
  std::vector<opt::Vec> starts;
  for (double s : {0.8, 0.95, 1.1, 1.25}) {
    for (double th : {0.0, 0.5 * kPi, kPi, -0.5 * kPi}) {
      opt::Vec x(2);
      x << base * s, th;
      starts.push_back(x);
    }
  }
  opt::Vec step(2);
  step << 0.1, 0.3;
  const opt::MinimizeResult r = opt::multi_start(objective, starts, step, 1e-9, 4000);
  AnalyticalFit fit;
  fit.alpha_fit = std::abs(r.x(0));
  fit.theta = wrap_angle(r.x(1));
  fit.fidelity = -r.value;
  fit.evaluations = r.evaluations;
  fit.converged = r.converged;
  return fit;
}

AnalyticalFit fit_analytical(const JointState& rho, cplx c_g, cplx c_e, double t_C, double g0) {
  return fit_analytical(rho, AnalyticalTargetSpec{c_g, c_e, t_C, g0});
}

CssFit fit_css(const JointState& rho_state) {
  const CMat rho = restricted_phonon(rho_state);
  const int dim = static_cast<int>(rho.rows());
  // p = (Re c, Im c, D, phi, vartheta); alpha_{1,2} = c +- D e^{i phi}.
  auto make = [&](const opt::Vec& p) {
    const cplx c(p(0), p(1));
    const cplx d = p(2) * std::polar(1.0, p(3));
    return css_vector(c + d, c - d, p(4), dim);
  };
  auto objective = [&](const opt::Vec& p) { return -fidelity_pure(rho, make(p)); };

  const cplx c0 = mean_a(rho);
  const double spread = std::sqrt(std::max(mean_n(rho) - std::norm(c0), 0.05));
  std::vector<opt::Vec> starts;
  for (double s : {0.6, 0.85, 1.1, 1.35}) {
    for (double phi : {0.0, 0.25 * kPi, 0.5 * kPi, 0.75 * kPi}) {
      opt::Vec x(5);
      x << c0.real(), c0.imag(), spread * s, phi, 0.0;
      double best = INFINITY;
      double best_v = 0.0;
      for (double v : {0.0, 0.5 * kPi, kPi, 1.5 * kPi}) {
        x(4) = v;
        const double f = objective(x);
        if (f < best) {
          best = f;
          best_v = v;
        }
      }
      x(4) = best_v;
      starts.push_back(x);
    }
  }
  opt::Vec step(5);
  step << 0.1, 0.1, 0.1, 0.2, 0.3;
  const opt::MinimizeResult r = opt::multi_start(objective, starts, step, 1e-9, 6000);
  CssFit fit;
  const cplx c(r.x(0), r.x(1));
  const cplx d = r.x(2) * std::polar(1.0, r.x(3));
  fit.alpha1 = c + d;
  fit.alpha2 = c - d;
  fit.vartheta = wrap_angle(r.x(4));
  fit.fidelity = -r.value;
  fit.D = std::abs(fit.alpha1 - fit.alpha2) / 2.0;
  fit.evaluations = r.evaluations;
  fit.converged = r.converged;
  return fit;
}

SensitivityInterval profile_interval(const std::function<double(double)>& profile, double best,
                                     double best_value, double drop, double step, double max_distance,
                                     double lower_bound) {
  if (!(drop >= 0.0) || !(step > 0.0) || !(max_distance > 0.0)) {
    throw std::invalid_argument("profile_interval: drop >= 0, step > 0 and max_distance > 0 required");
  }
  SensitivityInterval out;
  out.best = best;
  out.low = best;
  out.high = best;
  out.drop = drop;
  if (drop == 0.0) return out;
  const double level = std::max(best_value, profile(best)) - drop;

  auto search = [&](double dir, double& edge, bool& found) {
    double inside = best;
    for (double dist = step; dist <= max_distance + 1e-12; dist += step) {
      double x = best + dir * dist;
      if (x < lower_bound) x = lower_bound;
      if (profile(x) < level) {
        edge = opt::bisect_crossing(profile, inside, x, level, 1e-7 * std::max(1.0, std::abs(best)));
        found = true;
        return;
      }
      inside = x;
      if (x == lower_bound) break;
    }
    edge = inside;
    found = false;
  };
  search(-1.0, out.low, out.low_found);
  search(+1.0, out.high, out.high_found);
  return out;
}

SensitivityInterval sensitivity_interval(const JointState& rho_state, const AnalyticalFit& fit,
                                         const AnalyticalTargetSpec& spec, double drop) {
  const CMat rho = restricted_phonon(rho_state);
  const int dim = static_cast<int>(rho.rows());
  auto profile = [&](double alpha) {
    auto f = [&](double th) { return -fidelity_low_rank(rho, analytical_target_factor(alpha, th, spec, dim)); };
    const opt::ScalarResult r = opt::brent_minimize(f, fit.theta - 0.6, fit.theta + 0.6, 40);
    return -r.value;
  };
  return profile_interval(profile, fit.alpha_fit, fit.fidelity, drop, 0.01, 1.5, 0.0);
}

SensitivityInterval sensitivity_interval(const JointState& rho_state, const CssFit& fit, double drop) {
  const CMat rho = restricted_phonon(rho_state);
  const int dim = static_cast<int>(rho.rows());
  const cplx c = 0.5 * (fit.alpha1 + fit.alpha2);
  const cplx d = 0.5 * (fit.alpha1 - fit.alpha2);
  const double phi = std::arg(d);
  auto profile = [&](double D) {
    auto obj = [&](const opt::Vec& p) {
      const cplx cc(p(0), p(1));
      const cplx dd = D * std::polar(1.0, p(2));
      return -fidelity_pure(rho, css_vector(cc + dd, cc - dd, p(3), dim));
    };
    opt::Vec x0(4);
    x0 << c.real(), c.imag(), phi, fit.vartheta;
    opt::Vec step(4);
    step << 0.05, 0.05, 0.1, 0.2;
    return -opt::nelder_mead(obj, x0, step, 1e-8, 3000).value;
  };
  return profile_interval(profile, fit.D, fit.fidelity, drop, 0.01, 1.5, 0.0);
}

}  // namespace catsim
