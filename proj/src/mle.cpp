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

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace catsim {

namespace {

constexpr double kProbFloor = 1e-15;

struct Likelihood {
  std::vector<CMat> parity;  // c * D(beta) Pi D(beta)^dag, restricted
  std::vector<double> f_plus;
  std::vector<double> weight;

  // Expected parities Tr(rho P_k).
  std::vector<double> expectations(const CMat& rho) const {
    std::vector<double> e(parity.size());
    const CMat rt = rho.transpose();
    for (size_t k = 0; k < parity.size(); ++k) e[k] = rt.cwiseProduct(parity[k]).sum().real();
    return e;
  }

  double value(const std::vector<double>& e) const {
    double l = 0.0;
    for (size_t k = 0; k < e.size(); ++k) {
      const double pp = std::clamp(0.5 * (1.0 + e[k]), kProbFloor, 1.0 - kProbFloor);
      const double fp = f_plus[k];
      const double fm = 1.0 - fp;
      if (fp > 0.0) l += weight[k] * fp * std::log(pp);
      if (fm > 0.0) l += weight[k] * fm * std::log(1.0 - pp);
    }
    return l;
  }

  double value(const CMat& rho) const { return value(expectations(rho)); }

  // R = sum_k w_k (f+/p+ E+ + f-/p- E-), with E+- = (I +- P_k)/2.
  CMat r_operator(const std::vector<double>& e, int dim) const {
    CMat r = CMat::Zero(dim, dim);
    double diag = 0.0;
    for (size_t k = 0; k < e.size(); ++k) {
      const double pp = std::clamp(0.5 * (1.0 + e[k]), kProbFloor, 1.0 - kProbFloor);
      const double a = f_plus[k] / pp;
      const double b = (1.0 - f_plus[k]) / (1.0 - pp);
      diag += weight[k] * 0.5 * (a + b);
      r += (weight[k] * 0.5 * (a - b)) * parity[k];
    }
    r.diagonal().array() += diag;
    return hermitize(r);
  }
};

CMat unit_trace(const CMat& m) {
  const CMat h = hermitize(m);
  return h / h.trace().real();
}

CMat project_psd(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  const double s = w.sum();
  if (!(s > 0.0)) return CMat();
  return unit_trace(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint());
}

// Euclidean projection onto unit-trace PSD matrices: the eigenvalues are
// projected onto the probability simplex, so small ones become exactly zero.
CMat project_density(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  const Eigen::VectorXd ev = es.eigenvalues();
  std::vector<double> u(ev.data(), ev.data() + ev.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double shift = 0.0;
  for (size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    const double t = (cum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) shift = t;
  }
  const Eigen::VectorXd w = (ev.array() - shift).cwiseMax(0.0);
  return hermitize(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint());
}

}  // namespace

MleResult mle_reconstruct(const WignerSampleSet& samples, const HilbertSpace& space, const MleOptions& options) {
  samples.validate();
  if (space.has_qubit() || !space.has_phonon()) {
    throw DimensionError("mle_reconstruct: reconstruction space must be phonon-only");
  }
  if (samples.betas.empty()) throw std::invalid_argument("mle_reconstruct: no samples");
  if (!(options.contrast > 0.0 && options.contrast <= 1.0)) {
    throw std::invalid_argument("mle_reconstruct: contrast must be in (0, 1]");
  }
  if (options.max_iters < 1 || !(options.tol >= 0.0) || !(options.initial_dilution > 0.0)) {
    throw std::invalid_argument("mle_reconstruct: invalid iteration options");
  }
  const int dim = space.dim();
  Likelihood lk;
  const size_t m = samples.betas.size();
  lk.parity.reserve(m);
  for (size_t k = 0; k < m; ++k) {
    lk.parity.push_back(options.contrast * displaced_parity(samples.betas[k], dim));
    lk.f_plus.push_back(0.5 * (1.0 + samples.measured_parities[k]));
    lk.weight.push_back(1.0 / static_cast<double>(m));
  }

  CMat rho = CMat::Identity(dim, dim) / static_cast<double>(dim);
  std::vector<double> e = lk.expectations(rho);
  double l0 = lk.value(e);
  std::vector<double> history{l0};
  double eps = options.initial_dilution;
  double beta = 1.0;
  // Accelerated projected-gradient state: previous iterate, momentum weight
  // and step size.
  CMat prev = rho;
  double theta = 1.0;
  double step = 1.0;
  int stall = 0;
  bool converged = false;
  int it = 0;
  const CMat eye = CMat::Identity(dim, dim);

  for (; it < options.max_iters; ++it) {
    const CMat r = lk.r_operator(e, dim);
    CMat next;
    double l1 = -INFINITY;
    for (;;) {
      const CMat rd = (eye + eps * r) / (1.0 + eps);
      next = unit_trace(rd * rho * rd);
      l1 = lk.value(next);
      if (l1 >= l0 || eps < 1e-10) break;
      eps *= 0.5;
    }
    if (l1 < l0) {
      // No ascent along the multiplicative direction: stationary point.
      converged = true;
      break;
    }
    if (options.extrapolate) {
      const CMat ex = project_psd(next + beta * (next - rho));
      if (ex.size() != 0) {
        const double le = lk.value(ex);
        if (le > l1) {
          next = ex;
          l1 = le;
          beta = std::min(beta * 1.5, 50.0);
        } else {
          beta = std::max(beta * 0.5, 0.5);
        }
      }
      // Monotone accelerated projected gradient from the momentum point.
      // The likelihood gradient is the R operator.
      const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      const CMat y = project_density(rho + ((theta - 1.0) / theta_next) * (rho - prev));
      const std::vector<double> ey = lk.expectations(y);
      const double ly = lk.value(ey);
      const CMat gy = lk.r_operator(ey, dim);
      CMat z;
      double lz = -INFINITY;
      for (int bt = 0; bt < 30; ++bt) {
        z = project_density(y + step * gy);
        lz = lk.value(z);
        const CMat dz = z - y;
        const double model = ly + (gy.adjoint() * dz).trace().real() - dz.squaredNorm() / (2.0 * step);
        if (lz >= model) break;
        step *= 0.5;
      }
      theta = theta_next;
      if (lz > l1) {
        next = unit_trace(z);
        l1 = lk.value(next);
        step *= 1.5;
      } else {
        theta = 1.0;  // restart the momentum
      }
    }
    if (l1 < l0) {
      std::ostringstream os;
      os << "mle_reconstruct: log-likelihood decreased at iteration " << it;
      throw NumericalError(os.str());
    }
    const double gain = l1 - l0;
    prev = rho;
    rho = next;
    e = lk.expectations(rho);
    history.push_back(l1);
    stall = gain < options.tol * std::abs(l0) ? stall + 1 : 0;
    l0 = l1;
    eps = std::min(eps * 2.0, 1e3);
    if (stall >= 3) {
      converged = true;
      ++it;
      break;
    }
  }

  CMat out = unit_trace(rho);
  return MleResult{JointState::mixed(space, out), std::move(history), it, converged};
}

}  // namespace catsim
