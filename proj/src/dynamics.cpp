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

#include "catsim/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace catsim {

void SystemParams::validate() const {
  auto bad = [](const std::string& msg) { throw std::invalid_argument("SystemParams: " + msg); };
  if (!(g0 > 0.0) || !std::isfinite(g0)) bad("g0 must be positive");
  if (!(kappa_phonon >= 0.0) || !(gamma_qubit >= 0.0) || !(gamma_phi >= 0.0)) {
    bad("rates must be non-negative");
  }
  const double qn = std::norm(c_g) + std::norm(c_e);
  if (std::abs(qn - 1.0) > 1e-9) bad("qubit amplitudes are not normalized");
  if (n_max < 0) bad("n_max must be >= 0");
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag())) bad("alpha0 not finite");
}

int SystemParams::cutoff() const { return n_max > 0 ? n_max : recommended_n_max(std::abs(alpha0)); }

CharacteristicTimes characteristic_times(const SystemParams& params) {
  if (!(params.g0 > 0.0)) throw std::invalid_argument("characteristic_times: g0 must be positive");
  const double a = std::abs(params.alpha0);
  if (a == 0.0) throw std::invalid_argument("characteristic_times: t_R undefined for alpha = 0");
  const double tr = 2.0 * std::numbers::pi * a / params.g0;
  return {std::sqrt(2.0) / params.g0, tr, 0.5 * tr};
}

const std::vector<double>& Trajectory::observable(const std::string& name) const {
  auto it = observables.find(name);
  if (it == observables.end()) throw std::out_of_range("trajectory has no observable '" + name + "'");
  return it->second;
}

std::map<std::string, double> observables_of(const JointState& state) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::map<std::string, double> out{{"P_e", nan}, {"sx", nan}, {"sy", nan}, {"sz", nan}};
  const HilbertSpace& sp = state.space();
  const int dp = sp.phonon_dim();
  const CMat rho = state.density();
  double nmean = 0.0;
  for (int q = 0; q < sp.qubit_dim(); ++q)
    for (int n = 0; n < dp; ++n) nmean += n * rho(q * dp + n, q * dp + n).real();
  out["n_mean"] = nmean;
  if (sp.has_qubit() && sp.has_phonon()) {
    const CMat q = partial_trace(state, Subsystem::qubit).density();
    out["P_e"] = q(1, 1).real();
    out["sx"] = 2.0 * q(0, 1).real();
    out["sy"] = 2.0 * q(0, 1).imag();
    out["sz"] = (q(1, 1) - q(0, 0)).real();
    out["purity"] = q.squaredNorm();
  } else {
    out["purity"] = purity(state);
  }
  return out;
}

void append_observables(Trajectory& traj, const JointState& state) {
  for (const auto& [k, v] : observables_of(state)) traj.observables[k].push_back(v);
}

JcBranches jc_branches_unchecked(cplx alpha, cplx c_g, cplx c_e, double g0, double t, int dim) {
  const CVec c = coherent_amplitudes(alpha, dim + 1);
  JcBranches b{CVec(dim), CVec(dim)};
  const cplx i(0.0, 1.0);
  for (int n = 0; n < dim; ++n) {
    const double wn = g0 * std::sqrt(static_cast<double>(n)) * t;
    const double wn1 = g0 * std::sqrt(n + 1.0) * t;
    const cplx cm1 = n > 0 ? c(n - 1) : cplx(0.0);
    b.psi_g(n) = c(n) * c_g * std::cos(wn) - i * cm1 * c_e * std::sin(wn);
    b.psi_e(n) = c(n) * c_e * std::cos(wn1) - i * c(n + 1) * c_g * std::sin(wn1);
  }
  const double norm = std::sqrt(b.psi_g.squaredNorm() + b.psi_e.squaredNorm());
  b.psi_g /= norm;
  b.psi_e /= norm;
  return b;
}

namespace {

void guard_cutoff(const SystemParams& p) {
  const int nm = p.cutoff();
  const double a2 = std::norm(p.alpha0);
  if (a2 > nm / 4.0) {
    std::ostringstream os;
    os << "|alpha|^2 = " << a2 << " exceeds n_max/4 = " << nm / 4.0 << " (n_max = " << nm << ")";
    throw CutoffError(os.str());
  }
}

}  // namespace

JcBranches jc_branches(const SystemParams& params, double t) {
  params.validate();
  guard_cutoff(params);
  return jc_branches_unchecked(params.alpha0, params.c_g, params.c_e, params.g0, t,
                               params.cutoff() + 1);
}

JointState jc_evolve_exact(const SystemParams& params, double t) {
  const JcBranches b = jc_branches(params, t);
  const int dp = static_cast<int>(b.psi_g.size());
  CVec v(2 * dp);
  v.head(dp) = b.psi_g;
  v.tail(dp) = b.psi_e;
  return JointState::pure(params.joint_space(), std::move(v));
}

std::vector<double> excited_population(const SystemParams& params, const std::vector<double>& times) {
  params.validate();
  guard_cutoff(params);
  std::vector<double> out;
  out.reserve(times.size());
  const int dim = params.cutoff() + 1;
  for (double t : times) {
    const JcBranches b =
        jc_branches_unchecked(params.alpha0, params.c_g, params.c_e, params.g0, t, dim);
    out.push_back(std::clamp(b.psi_e.squaredNorm(), 0.0, 1.0));
  }
  return out;
}

Trajectory jc_trajectory(const SystemParams& params, const std::vector<double>& times, bool keep_states) {
  Trajectory traj;
  for (size_t k = 0; k < times.size(); ++k) {
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw std::invalid_argument("jc_trajectory: times must be strictly increasing");
    }
    JointState s = jc_evolve_exact(params, times[k]);
    append_observables(traj, s);
    if (keep_states) traj.states.push_back(std::move(s));
  }
  traj.times = times;
  return traj;
}

Envelope excited_population_envelope(const SystemParams& params, const std::vector<double>& times,
                                     EnvelopeForm form) {
  params.validate();
  const double a = std::abs(params.alpha0);
  const cplx frame = a > 0.0 ? params.alpha0 / a : cplx(1.0);
  const double pe = std::norm(params.c_e);
  const double pg = std::norm(params.c_g);
  const double cross = 2.0 * (frame * params.c_g * std::conj(params.c_e)).imag();
  const double tc = std::sqrt(2.0) / params.g0;

  // Mean Rabi frequency of each term under the Poisson weights it carries.
  double we = a, wg = a, wx = a;
  if (form == EnvelopeForm::mean_frequency) {
    we = std::sqrt(a * a + 1.0);
    wx = std::sqrt(a * a + 0.5);
  }
  Envelope env;
  env.outside_validity = a < 3.0;
  env.values.reserve(times.size());
  const double w = 2.0 * params.g0;
  for (double t : times) {
    const double damp = std::exp(-(t / tc) * (t / tc));
    const double osc = pe * std::cos(w * we * t) - pg * std::cos(w * wg * t) + cross * std::sin(w * wx * t);
    env.values.push_back(0.5 * (1.0 + damp * osc));
  }
  return env;
}

std::pair<JointState, JointState> phi_states(const SystemParams& params, double t) {
  params.validate();
  if (params.alpha0.imag() != 0.0 || params.alpha0.real() < 0.0) {
    throw std::invalid_argument("phi_states: alpha0 must be real and non-negative");
  }
  guard_cutoff(params);
  const int dim = params.cutoff() + 1;
  const CVec c = coherent_amplitudes(params.alpha0, dim);
  CVec p(dim), m(dim);
  for (int n = 0; n < dim; ++n) {
    const double ph = params.g0 * t * std::sqrt(static_cast<double>(n));
    p(n) = c(n) * std::polar(1.0, -ph);
    m(n) = c(n) * std::polar(1.0, ph);
  }
  p.normalize();
  m.normalize();
  const HilbertSpace sp = params.phonon_space();
  return {JointState::pure(sp, std::move(p)), JointState::pure(sp, std::move(m))};
}

JointState qubit_state(cplx c_g, cplx c_e) {
  CVec v(2);
  v << c_g, c_e;
  return JointState::pure(HilbertSpace::qubit(), std::move(v));
}

JointState cat_time_qubit_state() {
  const double s = 1.0 / std::sqrt(2.0);
  return qubit_state(s, cplx(0.0, -s));
}

double revival_contrast(const Trajectory& traj, double t_R) {
  const std::vector<double>& pe = traj.observable("P_e");
  if (traj.times.empty()) throw std::invalid_argument("revival_contrast: empty trajectory");
  double lo = traj.times.front();
  double hi = traj.times.back();
  if (std::isfinite(t_R) && t_R > 0.0) {
    lo = 0.8 * t_R;
    hi = 1.2 * t_R;
    const double slack = 1e-9 * std::max(1.0, t_R);
    if (traj.times.front() > lo + slack || traj.times.back() < hi - slack) {
      std::ostringstream os;
      os << "revival_contrast: trajectory [" << traj.times.front() << ", " << traj.times.back()
         << "] does not cover the window [" << lo << ", " << hi << "]";
      throw std::invalid_argument(os.str());
    }
  }
  double mx = -std::numeric_limits<double>::infinity();
  double mn = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < traj.times.size(); ++k) {
    if (traj.times[k] < lo || traj.times[k] > hi) continue;
    mx = std::max(mx, pe[k]);
    mn = std::min(mn, pe[k]);
  }
  if (!std::isfinite(mx)) throw std::invalid_argument("revival_contrast: no samples in window");
  return mx - mn;
}

double revival_contrast(const Trajectory& traj, const SystemParams& params) {
  const double a = std::abs(params.alpha0);
  const double tr = a > 0.0 ? 2.0 * std::numbers::pi * a / params.g0 : 0.0;
  return revival_contrast(traj, tr);
}

double revival_time_estimate(const std::vector<double>& times, const std::vector<double>& pe,
                             double t_R_guess) {
  if (times.size() != pe.size() || times.size() < 8) {
    throw std::invalid_argument("revival_time_estimate: need matching series of >= 8 samples");
  }
  const double lo = 0.5 * t_R_guess;
  const double hi = 1.5 * t_R_guess;
  double mean = 0.0;
  int count = 0;
  for (size_t k = 0; k < times.size(); ++k) {
    if (times[k] >= lo && times[k] <= hi) {
      mean += pe[k];
      ++count;
    }
  }
  if (count < 8) throw std::invalid_argument("revival_time_estimate: window not sampled");
  mean /= count;
  double num = 0.0, den = 0.0;
  for (size_t k = 0; k < times.size(); ++k) {
    if (times[k] < lo || times[k] > hi) continue;
    const double w = (pe[k] - mean) * (pe[k] - mean);
    num += w * times[k];
    den += w;
  }
  if (den <= 0.0) throw NumericalError("revival_time_estimate: flat trace");
  return num / den;
}

CollapseFit fit_collapse(const std::vector<double>& times, const std::vector<double>& pe, double tau_guess,
                         double omega_guess) {
  if (times.size() != pe.size() || times.size() < 6) {
    throw std::invalid_argument("fit_collapse: need matching series of >= 6 samples");
  }
  const int m = static_cast<int>(times.size());
  auto resid = [&](const opt::Vec& p, opt::Vec& r) {
    // p = (B, A, tau, omega, phi)
    for (int k = 0; k < m; ++k) {
      const double t = times[k];
      const double model = p(0) + p(1) * std::exp(-(t / p(2)) * (t / p(2))) * std::cos(p(3) * t + p(4));
      r(k) = model - pe[k];
    }
  };
  double mean = 0.0;
  for (double v : pe) mean += v;
  mean /= m;
  const double amp0 = pe.front() - mean;
  opt::Vec p0(5);
  p0 << mean, std::abs(amp0), tau_guess, omega_guess, amp0 >= 0.0 ? 0.0 : std::numbers::pi;
  const opt::LsqResult r = opt::levenberg_marquardt(resid, p0, m);
  if (!r.params.allFinite()) throw NumericalError("fit_collapse: fit diverged");
  return {std::abs(r.params(2)), r.params(3), r.params(1), r.params(0),
          r.residual_norm / std::sqrt(static_cast<double>(m))};
}

std::vector<double> linspace(double start, double stop, int count) {
  if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
  std::vector<double> v(static_cast<size_t>(count));
  if (count == 1) {
    v[0] = start;
    return v;
  }
  const double h = (stop - start) / (count - 1);
  for (int k = 0; k < count; ++k) v[static_cast<size_t>(k)] = start + h * k;
  v.back() = stop;
  return v;
}

}  // namespace catsim
