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

#include "catsim/tomography.hpp"

#include "catsim/optimize.hpp"
#include "catsim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace catsim {

void ReadoutModel::validate() const {
  if (!(contrast > 0.0 && contrast <= 1.0)) throw std::invalid_argument("ReadoutModel: contrast must be in (0, 1]");
  if (!std::isfinite(offset)) throw std::invalid_argument("ReadoutModel: offset must be finite");
  if (shots < 1) throw std::invalid_argument("ReadoutModel: shots must be >= 1");
  if (!(phonon_decay >= 0.0)) throw std::invalid_argument("ReadoutModel: phonon_decay must be >= 0");
}

double ReadoutModel::parity_lambda() const { return 1.0 - 2.0 * std::exp(-phonon_decay); }

void ParityNormalization::validate() const {
  if (!std::isfinite(amplitude) || !std::isfinite(offset) || !(amplitude > 0.0)) {
    throw std::invalid_argument("ParityNormalization: amplitude must be positive and finite");
  }
  if (!applied && (amplitude != 1.0 || offset != 0.0)) {
    throw std::invalid_argument(
        "ParityNormalization: record marked as not applied but carries a non-identity mapping");
  }
}

double ParityNormalization::apply(double raw) const {
  return std::clamp((raw - offset) / amplitude, -1.0, 1.0);
}

double DriveCalibration::beta_abs(double amplitude) const { return C * std::expm1(amplitude / B); }

void WignerSampleSet::validate() const {
  if (betas.size() != measured_parities.size()) {
    throw std::invalid_argument("WignerSampleSet: betas and parities differ in length");
  }
  if (shots_per_point < 1) throw std::invalid_argument("WignerSampleSet: shots_per_point must be >= 1");
  for (double p : measured_parities) {
    if (!(p >= -1.0 && p <= 1.0)) throw std::invalid_argument("WignerSampleSet: parity outside [-1, 1]");
  }
  normalization.validate();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double expected_parity(const CMat& rho, cplx beta, double phonon_decay) {
  const double lambda = 1.0 - 2.0 * std::exp(-phonon_decay);
  const CMat p = displaced_parity(beta, static_cast<int>(rho.rows()), lambda);
  return (rho.transpose().cwiseProduct(p)).sum().real();
}

namespace {

double draw_mean(double raw_expected, int shots, std::uint64_t seed) {
  const double p = 0.5 * (1.0 + raw_expected);
  if (p < -1e-12 || p > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "readout model inconsistent: outcome probability " << p << " outside [0, 1]";
    throw std::invalid_argument(os.str());
  }
  std::mt19937_64 rng(seed);
  std::binomial_distribution<int> dist(shots, std::clamp(p, 0.0, 1.0));
  const int k = dist(rng);
  return 2.0 * k / shots - 1.0;
}

}  // namespace

double simulate_parity_readout(const JointState& state, cplx beta, const ReadoutModel& model,
                               std::uint64_t point_index) {
  model.validate();
  if (state.space().has_qubit()) throw DimensionError("simulate_parity_readout: expects a phonon-only state");
  const double par = expected_parity(state.density(), beta, model.phonon_decay);
  return draw_mean(model.contrast * par + model.offset, model.shots, derive_seed(model.seed, point_index));
}

ParityNormalization calibrate_parity(const ReadoutModel& model, int n_phases, bool noiseless) {
  model.validate();
  if (n_phases < 4) throw std::invalid_argument("calibrate_parity: need >= 4 analysis phases");
  Eigen::MatrixXd X(n_phases, 3);
  Eigen::VectorXd y(n_phases);
  // Seeds for the calibration sweep live in a separate stream from the
  // tomography points.
  const std::uint64_t stream = derive_seed(model.seed, 0xCA11B7A7EULL);
  for (int k = 0; k < n_phases; ++k) {
    const double phi = 2.0 * std::numbers::pi * k / n_phases;
    const double raw = model.contrast * std::cos(phi) + model.offset;
    X(k, 0) = std::cos(phi);
    X(k, 1) = std::sin(phi);
    X(k, 2) = 1.0;
    y(k) = noiseless ? raw : draw_mean(raw, model.shots, derive_seed(stream, static_cast<std::uint64_t>(k)));
  }
  const Eigen::VectorXd c = X.colPivHouseholderQr().solve(y);
  ParityNormalization n;
  n.amplitude = std::hypot(c(0), c(1));
  n.offset = c(2);
  n.applied = true;
  if (!(n.amplitude > 1e-6)) throw NumericalError("calibrate_parity: fitted contrast vanishes");
  return n;
}

WignerSampleSet sample_wigner(const JointState& state, const std::vector<cplx>& betas,
                              const ReadoutModel& model, const ParityNormalization& normalization) {
  model.validate();
  normalization.validate();
  WignerSampleSet s;
  s.betas = betas;
  s.shots_per_point = model.shots;
  s.normalization = normalization;
  s.measured_parities.assign(betas.size(), 0.0);
  parallel_for(betas.size(), [&](size_t k) {
    const double raw = simulate_parity_readout(state, betas[k], model, k);
    s.measured_parities[k] = normalization.apply(raw);
  });
  return s;
}

std::vector<cplx> square_grid(double half_width, int n) {
  if (n < 2 || !(half_width > 0.0)) throw std::invalid_argument("square_grid: need n >= 2, half_width > 0");
  std::vector<cplx> pts;
  pts.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
  const double h = 2.0 * half_width / (n - 1);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) pts.emplace_back(-half_width + h * ix, -half_width + h * iy);
  return pts;
}

DriveCalibration calibrate_drive(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3) throw std::invalid_argument("calibrate_drive: need >= 3 samples");
  std::vector<std::pair<double, double>> s = samples;
  for (const auto& [a, b] : s) {
    if (!(a >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("calibrate_drive: A must be >= 0");
  }
  std::sort(s.begin(), s.end());
  const double amax = s.back().first;
  if (!(amax > 0.0)) throw std::invalid_argument("calibrate_drive: all amplitudes are zero");
  const size_t m = s.size();

  // For fixed B the model is linear in C.
  auto best_c = [&](double B, double& rss) {
    double num = 0.0, den = 0.0;
    for (const auto& [a, y] : s) {
      const double f = std::expm1(a / B);
      num += f * y;
      den += f * f;
    }
    const double C = den > 0.0 ? num / den : 0.0;
    rss = 0.0;
    for (const auto& [a, y] : s) rss += std::pow(C * std::expm1(a / B) - y, 2);
    return C;
  };
  double B0 = amax, C0 = 1.0, r0 = INFINITY;
  for (int k = 0; k < 400; ++k) {
    const double B = amax * std::pow(10.0, -1.5 + 4.0 * k / 399.0);
    double rss;
    const double C = best_c(B, rss);
    if (rss < r0) {
      r0 = rss;
      B0 = B;
      C0 = C;
    }
  }
  auto resid = [&](const opt::Vec& p, opt::Vec& r) {
    for (size_t k = 0; k < m; ++k) {
      r(static_cast<Eigen::Index>(k)) = p(1) * std::expm1(s[k].first / p(0)) - s[k].second;
    }
  };
  opt::Vec p0(2);
  p0 << B0, C0;
  const opt::LsqResult fit = opt::levenberg_marquardt(resid, p0, static_cast<int>(m), 1e-14);
  if (!fit.params.allFinite() || !(fit.params(0) > 0.0) || !(fit.params(1) > 0.0)) {
    throw NumericalError("calibrate_drive: fit diverged (non-positive B or C)");
  }
  DriveCalibration cal;
  cal.B = fit.params(0);
  cal.C = fit.params(1);
  cal.residual = fit.residual_norm / std::sqrt(static_cast<double>(m));
  // Noise scale from each interior point's deviation from the chord through
  // its neighbours (variance 1.5 sigma^2 for uniform spacing). It needs no
  // model, so a fit bent by bad points cannot inflate it.
  std::vector<double> dev;
  for (size_t k = 1; k + 1 < m; ++k) {
    const double span = s[k + 1].first - s[k - 1].first;
    if (!(span > 0.0)) continue;
    const double w = (s[k].first - s[k - 1].first) / span;
    dev.push_back(std::abs(s[k].second - ((1.0 - w) * s[k - 1].second + w * s[k + 1].second)));
  }
  double noise = 0.0;
  if (!dev.empty()) {
    const size_t mid = dev.size() / 2;
    std::nth_element(dev.begin(), dev.begin() + static_cast<std::ptrdiff_t>(mid), dev.end());
    noise = 1.4826 * dev[mid] / std::sqrt(1.5);
  }
  for (size_t k = 1; k < m; ++k) {
    if (s[k].second < s[k - 1].second - 3.0 * noise - 1e-12) cal.nonmonotone_warning = true;
  }
  return cal;
}

std::vector<double> fock_rabi_trace(const std::vector<double>& populations, double g0, double gamma_d,
                                    const std::vector<double>& times) {
  std::vector<double> out(times.size(), 0.0);
  for (size_t k = 0; k < times.size(); ++k) {
    const double damp = std::exp(-gamma_d * times[k]);
    double v = 0.0;
    for (size_t n = 0; n < populations.size(); ++n) {
      v += populations[n] * 0.5 * (1.0 + std::cos(2.0 * g0 * std::sqrt(n + 1.0) * times[k]) * damp);
    }
    out[k] = v;
  }
  return out;
}

namespace {

Eigen::MatrixXd fock_design(const std::vector<double>& times, double g0, double gamma_d, int n_cols) {
  Eigen::MatrixXd A(static_cast<Eigen::Index>(times.size()), n_cols);
  for (size_t k = 0; k < times.size(); ++k) {
    const double damp = std::exp(-gamma_d * times[k]);
    for (int n = 0; n < n_cols; ++n) {
      A(static_cast<Eigen::Index>(k), n) = 0.5 * (1.0 + std::cos(2.0 * g0 * std::sqrt(n + 1.0) * times[k]) * damp);
    }
  }
  return A;
}

// NNLS with sum(p) <= 1 enforced through a heavily weighted equality row
// when the unconstrained solution overshoots.
Eigen::VectorXd capped_nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Eigen::VectorXd p = opt::nnls(A, b);
  if (p.sum() <= 1.0 + 1e-12) return p;
  const double w = 1e4 * std::max(1.0, A.norm());
  Eigen::MatrixXd Aw(A.rows() + 1, A.cols());
  Eigen::VectorXd bw(b.size() + 1);
  Aw.topRows(A.rows()) = A;
  Aw.row(A.rows()).setConstant(w);
  bw.head(b.size()) = b;
  bw(b.size()) = w;
  p = opt::nnls(Aw, bw);
  const double sum = p.sum();
  if (sum > 1.0) p /= sum;
  return p;
}

}  // namespace

FockFit extract_fock_populations(const std::vector<double>& times, const std::vector<double>& pe, double g0,
                                 int n_fit) {
  if (times.size() != pe.size()) throw std::invalid_argument("extract_fock_populations: length mismatch");
  if (!(g0 > 0.0)) throw std::invalid_argument("extract_fock_populations: g0 must be positive");
  if (n_fit < 0 || n_fit > 60) throw std::invalid_argument("extract_fock_populations: n_fit must be in [0, 60]");
  const int cols = n_fit + 1;
  if (times.size() < static_cast<size_t>(2 * cols + 4)) {
    throw NumericalError("extract_fock_populations: too few samples for the requested n_fit");
  }
  const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
  const double span = *tmax - *tmin;
  const double rabi_period = std::numbers::pi / g0;
  if (span < 2.0 * rabi_period) {
    std::ostringstream os;
    os << "extract_fock_populations: trace spans " << span << " us, needs >= 2 vacuum-Rabi periods ("
       << 2.0 * rabi_period << " us)";
    throw NumericalError(os.str());
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(pe.data(), static_cast<Eigen::Index>(pe.size()));

  auto rss_at = [&](double gamma) {
    const Eigen::MatrixXd A = fock_design(times, g0, gamma, cols);
    const Eigen::VectorXd p = capped_nnls(A, b);
    return (A * p - b).squaredNorm();
  };
  // Coarse scan then Brent refinement keeps the search away from local
  // minima of the profile.
  const double gmax = 20.0 / span;
  const int n_scan = 60;
  int kbest = 0;
  double rbest = INFINITY;
  std::vector<double> grid(n_scan);
  for (int k = 0; k < n_scan; ++k) {
    grid[k] = gmax * k / (n_scan - 1);
    const double r = rss_at(grid[k]);
    if (r < rbest) {
      rbest = r;
      kbest = k;
    }
  }
  const double lo = grid[std::max(0, kbest - 1)];
  const double hi = grid[std::min(n_scan - 1, kbest + 1)];
  const opt::ScalarResult br = opt::brent_minimize(rss_at, lo, hi, 52);
  const double gamma = br.value <= rbest ? br.x : grid[kbest];

  const Eigen::MatrixXd A = fock_design(times, g0, gamma, cols);
  const Eigen::VectorXd p = capped_nnls(A, b);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const Eigen::VectorXd sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond < 1e10)) {
    std::ostringstream os;
    os << "extract_fock_populations: ill-conditioned design (condition number " << cond
       << "); lengthen the trace or lower n_fit";
    throw NumericalError(os.str());
  }

  FockFit fit;
  fit.populations.assign(p.data(), p.data() + p.size());
  fit.gamma_d = gamma;
  fit.residual = std::sqrt((A * p - b).squaredNorm() / static_cast<double>(b.size()));
  fit.condition_number = cond;

  auto poisson_rss = [&](double beta) {
    const double m = beta * beta;
    double term = std::exp(-m);
    double r = 0.0;
    for (int n = 0; n < cols; ++n) {
      if (n > 0) term *= m / n;
      r += std::pow(fit.populations[static_cast<size_t>(n)] - term, 2);
    }
    return r;
  };
  // The residual is flat for large beta, so bracket the minimum by a scan first.
  const double bmax = std::sqrt(static_cast<double>(cols)) + 3.0;
  const int n_beta = 200;
  int jbest = 0;
  double best = INFINITY;
  for (int j = 0; j < n_beta; ++j) {
    const double r = poisson_rss(bmax * j / (n_beta - 1));
    if (r < best) {
      best = r;
      jbest = j;
    }
  }
  fit.beta_abs = opt::brent_minimize(poisson_rss, bmax * std::max(0, jbest - 1) / (n_beta - 1),
                                     bmax * std::min(n_beta - 1, jbest + 1) / (n_beta - 1), 52).x;
  return fit;
}

}  // namespace catsim
