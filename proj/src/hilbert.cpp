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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace catsim {

namespace {

// Outputs of partial traces inherit whatever slack the input carried.
const StateTolerance kDerivedTolerance{1e-8, 1e-12, 1e-7};

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

HilbertSpace::HilbertSpace(int n_max, bool has_qubit) : HilbertSpace(n_max, has_qubit, true) {
  if (n_max < 1) {
    throw DimensionError("HilbertSpace: n_max must be >= 1, got " + std::to_string(n_max));
  }
}

HilbertSpace::HilbertSpace(int n_max, bool has_qubit, bool has_phonon)
    : n_max_(n_max), has_qubit_(has_qubit), has_phonon_(has_phonon) {}

HilbertSpace HilbertSpace::qubit() { return HilbertSpace(0, true, false); }

HilbertSpace HilbertSpace::phonon_part() const {
  if (!has_phonon_) throw DimensionError("qubit-only space has no phonon factor");
  return HilbertSpace(n_max_, false);
}

std::string HilbertSpace::describe() const {
  std::ostringstream os;
  if (!has_phonon_) {
    os << "qubit";
  } else if (has_qubit_) {
    os << "qubit x phonon(n_max=" << n_max_ << ")";
  } else {
    os << "phonon(n_max=" << n_max_ << ")";
  }
  return os.str();
}

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const std::string& what) {
  if (!(a == b)) {
    throw DimensionError(what + ": space mismatch (" + a.describe() + " vs " + b.describe() + ")");
  }
}

JointState JointState::pure(const HilbertSpace& space, CVec psi, const StateTolerance& tol,
                            double truncation_deficit) {
  if (psi.size() != space.dim()) {
    throw DimensionError("pure state: vector length " + std::to_string(psi.size()) +
                         " does not match " + space.describe());
  }
  if (!psi.allFinite()) throw StateError("pure state: non-finite amplitudes");
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tol.norm) {
    std::ostringstream os;
    os << "pure state: norm " << norm << " deviates from 1 by more than " << tol.norm;
    throw StateError(os.str());
  }
  JointState s(space, StateKind::pure);
  s.psi_ = std::move(psi);
  s.truncation_deficit_ = truncation_deficit;
  return s;
}

JointState JointState::mixed(const HilbertSpace& space, CMat rho, const StateTolerance& tol) {
  const int d = space.dim();
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError("mixed state: matrix shape does not match " + space.describe());
  }
  if (!rho.allFinite()) throw StateError("mixed state: non-finite entries");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol.norm) {
    std::ostringstream os;
    os << "mixed state: trace " << tr << " deviates from 1 by more than " << tol.norm;
    throw StateError(os.str());
  }
  const double herm = max_abs(rho - rho.adjoint());
  if (herm > tol.hermitian) {
    std::ostringstream os;
    os << "mixed state: not Hermitian (max deviation " << herm << ")";
    throw StateError(os.str());
  }
  const double lmin = min_eigenvalue(rho);
  if (lmin < -tol.psd) {
    std::ostringstream os;
    os << "mixed state: negative eigenvalue " << lmin;
    throw StateError(os.str());
  }
  JointState s(space, StateKind::mixed);
  s.rho_ = std::move(rho);
  return s;
}

const CVec& JointState::vector() const {
  if (kind_ != StateKind::pure) throw StateError("state vector requested from a mixed state");
  return psi_;
}

CMat JointState::density() const {
  if (kind_ == StateKind::pure) return psi_ * psi_.adjoint();
  return rho_;
}

OperatorSet OperatorSet::build(const HilbertSpace& space) {
  OperatorSet ops{space, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  const int dp = space.phonon_dim();
  const int dq = space.qubit_dim();

  CMat a_p = CMat::Zero(dp, dp);
  CMat num_p = CMat::Zero(dp, dp);
  CMat par_p = CMat::Zero(dp, dp);
  if (space.has_phonon()) {
    for (int n = 1; n < dp; ++n) a_p(n - 1, n) = std::sqrt(static_cast<double>(n));
    for (int n = 0; n < dp; ++n) {
      num_p(n, n) = static_cast<double>(n);
      par_p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    }
  }
  const CMat iq = CMat::Identity(dq, dq);
  const CMat ip = CMat::Identity(dp, dp);
  auto kron = [](const CMat& x, const CMat& y) {
    CMat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < x.cols(); ++j)
        out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    return out;
  };

  if (space.has_phonon()) {
    ops.a = kron(iq, a_p);
    ops.a_dagger = ops.a.adjoint();
    ops.number_op = kron(iq, num_p);
    ops.parity_op = kron(iq, par_p);
  }
  if (space.has_qubit()) {
    CMat sp = CMat::Zero(2, 2);
    sp(1, 0) = 1.0;  // |e><g|
    const cplx i(0.0, 1.0);
    CMat sz = CMat::Zero(2, 2);
    sz(0, 0) = -1.0;
    sz(1, 1) = 1.0;
    ops.sigma_plus = kron(sp, ip);
    ops.sigma_minus = ops.sigma_plus.adjoint();
    ops.sigma_x = ops.sigma_plus + ops.sigma_minus;
    ops.sigma_y = -i * ops.sigma_plus + i * ops.sigma_minus;
    ops.sigma_z = kron(sz, ip);
  }
  return ops;
}

CMat OperatorSet::displacement(cplx beta) const {
  if (!space.has_phonon()) throw DimensionError("displacement needs a phonon factor");
  const int dp = space.phonon_dim();
  const CMat d = displacement_elements(beta, dp);
  if (!space.has_qubit()) return d;
  CMat out = CMat::Zero(2 * dp, 2 * dp);
  out.topLeftCorner(dp, dp) = d;
  out.bottomRightCorner(dp, dp) = d;
  return out;
}

CMat displacement_elements(cplx gamma, int dim) {
  if (dim < 1) throw DimensionError("displacement_elements: dim must be >= 1");
  // <n+k|D|n> = f_n^k e^{ik phi} and <n|D|n+k> = f_n^k (-e^{-i phi})^k with
  // f_n^k = sqrt(n!/(n+k)!) r^k e^{-x/2} L_n^k(x), x = r^2. The normalized
  // Laguerre recurrence keeps every intermediate of order one.
  const double x = std::norm(gamma);
  const double r = std::sqrt(x);
  const double phi = std::arg(gamma);
  CMat d(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double log_f0 = (k > 0 ? k * std::log(r) : 0.0) - 0.5 * x - 0.5 * std::lgamma(k + 1.0);
    double f_prev = 0.0;
    double f = r > 0.0 || k == 0 ? std::exp(log_f0) : 0.0;
    const cplx below = std::polar(1.0, k * phi);
    const cplx above = std::polar(1.0, k * (std::numbers::pi - phi));
    for (int n = 0; n + k < dim; ++n) {
      d(n + k, n) = f * below;
      if (k > 0) d(n, n + k) = f * above;
      const double f_next = ((2.0 * n + k + 1.0 - x) * f - std::sqrt(n * (n + static_cast<double>(k))) * f_prev) /
                            std::sqrt((n + 1.0) * (n + k + 1.0));
      f_prev = f;
      f = f_next;
    }
  }
  return d;
}

CMat displaced_parity(cplx beta, int dim, double lambda) {
  if (lambda == -1.0) {
    // D(b) Pi D(b)^dag = D(2b) Pi, whose restricted elements are exact.
    CMat p = displacement_elements(2.0 * beta, dim);
    for (int n = 1; n < dim; n += 2) p.col(n) *= -1.0;
    return p;
  }
  // |lambda| < 1: sum over an enlarged intermediate basis; the neglected tail
  // is suppressed by both the displacement envelope and lambda^n.
  const double b = std::abs(beta);
  const int pad = static_cast<int>(std::ceil(4.0 * b * b + 10.0 * b + 24.0));
  const int big = dim + pad;
  const CMat d = displacement_elements(beta, big);
  Eigen::VectorXd w(big);
  double lp = 1.0;
  for (int n = 0; n < big; ++n) {
    w(n) = lp;
    lp *= lambda;
  }
  const CMat top = d.topRows(dim);
  return top * w.asDiagonal() * top.adjoint();
}

int recommended_n_max(double abs_alpha) {
  const double a2 = abs_alpha * abs_alpha;
  return static_cast<int>(std::ceil(std::max({4.0 * a2, a2 + 8.0 * abs_alpha + 10.0, 1.0})));
}

CVec coherent_amplitudes(cplx alpha, int count) {
  CVec c = CVec::Zero(count);
  if (count == 0) return c;
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n + 1 < count; ++n) c(n + 1) = c(n) * alpha / std::sqrt(n + 1.0);
  return c;
}

JointState coherent_state(cplx alpha, const HilbertSpace& space) {
  if (space.has_qubit() || !space.has_phonon()) {
    throw DimensionError("coherent_state: needs a phonon-only space");
  }
  const double a2 = std::norm(alpha);
  if (a2 > space.n_max() / 4.0) {
    std::ostringstream os;
    os << "coherent_state: |alpha|^2 = " << a2 << " exceeds n_max/4 = " << space.n_max() / 4.0
       << "; raise n_max to at least " << recommended_n_max(std::abs(alpha));
    throw CutoffError(os.str());
  }
  CVec c = coherent_amplitudes(alpha, space.phonon_dim());
  const double mass = c.squaredNorm();
  c /= std::sqrt(mass);
  return JointState::pure(space, std::move(c), {}, std::max(0.0, 1.0 - mass));
}

JointState fock_state(int n, const HilbertSpace& space) {
  if (space.has_qubit() || !space.has_phonon()) {
    throw DimensionError("fock_state: needs a phonon-only space");
  }
  if (n < 0 || n > space.n_max()) throw CutoffError("fock_state: n outside the truncated basis");
  CVec v = CVec::Zero(space.dim());
  v(n) = 1.0;
  return JointState::pure(space, std::move(v));
}

JointState tensor(const JointState& qubit, const JointState& phonon) {
  if (!(qubit.space() == HilbertSpace::qubit())) {
    throw DimensionError("tensor: first factor must live in the qubit space");
  }
  if (phonon.space().has_qubit() || !phonon.space().has_phonon()) {
    throw DimensionError("tensor: second factor must be phonon-only");
  }
  const HilbertSpace joint(phonon.space().n_max(), true);
  const int dp = phonon.space().dim();
  if (qubit.is_pure() && phonon.is_pure()) {
    CVec v(2 * dp);
    v.head(dp) = qubit.vector()(0) * phonon.vector();
    v.tail(dp) = qubit.vector()(1) * phonon.vector();
    v.normalize();
    return JointState::pure(joint, std::move(v));
  }
  const CMat q = qubit.density();
  const CMat p = phonon.density();
  CMat r(2 * dp, 2 * dp);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.block(i * dp, j * dp, dp, dp) = q(i, j) * p;
  return JointState::mixed(joint, hermitize(r), kDerivedTolerance);
}

JointState partial_trace(const JointState& state, Subsystem keep) {
  const HilbertSpace& sp = state.space();
  if (!sp.has_qubit() || !sp.has_phonon()) {
    throw DimensionError("partial_trace: needs a qubit x phonon state");
  }
  const int dp = sp.phonon_dim();
  if (keep == Subsystem::phonon) {
    CMat r;
    if (state.is_pure()) {
      const CVec& v = state.vector();
      r = v.head(dp) * v.head(dp).adjoint() + v.tail(dp) * v.tail(dp).adjoint();
    } else {
      const CMat rho = state.density();
      r = rho.topLeftCorner(dp, dp) + rho.bottomRightCorner(dp, dp);
    }
    return JointState::mixed(sp.phonon_part(), hermitize(r), kDerivedTolerance);
  }
  CMat q(2, 2);
  if (state.is_pure()) {
    const CVec& v = state.vector();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q(i, j) = v.segment(j * dp, dp).dot(v.segment(i * dp, dp));
  } else {
    const CMat rho = state.density();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q(i, j) = rho.block(i * dp, j * dp, dp, dp).trace();
  }
  return JointState::mixed(HilbertSpace::qubit(), hermitize(q), kDerivedTolerance);
}

double purity(const JointState& state) {
  if (state.is_pure()) {
    const double n2 = state.vector().squaredNorm();
    return n2 * n2;
  }
  const CMat rho = state.density();
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return rho.squaredNorm();
}

double fidelity(const JointState& rho, const JointState& sigma) {
  require_same_space(rho.space(), sigma.space(), "fidelity");
  if (rho.is_pure() && sigma.is_pure()) return std::abs(rho.vector().dot(sigma.vector()));
  if (sigma.is_pure()) return fidelity_pure(rho.density(), sigma.vector());
  if (rho.is_pure()) return fidelity_pure(sigma.density(), rho.vector());
  return fidelity(rho.density(), sigma.density());
}

CMat hermitize(const CMat& m) { return 0.5 * (m + m.adjoint()); }

namespace {

// Square roots of eigenvalues with the rounding floor removed: eigenvalues
// below dim * eps * max are treated as zero.
Eigen::VectorXd floored_sqrt(const Eigen::VectorXd& ev) {
  const double floor = static_cast<double>(ev.size()) * std::numeric_limits<double>::epsilon() *
                       std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  return ev.unaryExpr([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
}

}  // namespace

CMat psd_sqrt(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  if (es.info() != Eigen::Success) throw NumericalError("psd_sqrt: eigendecomposition failed");
  const Eigen::VectorXd s = floored_sqrt(es.eigenvalues());
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const CMat& rho, const CMat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionError("fidelity: matrix shapes differ");
  }
  const CMat sr = psd_sqrt(rho);
  const CMat m = hermitize(sr * sigma * sr);
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("fidelity: eigendecomposition failed");
  const double f = floored_sqrt(es.eigenvalues()).sum();
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_pure(const CMat& rho, const CVec& psi) {
  if (rho.rows() != psi.size()) throw DimensionError("fidelity_pure: dimension mismatch");
  const double ov = psi.dot(rho * psi).real();
  return std::clamp(std::sqrt(std::max(ov, 0.0)), 0.0, 1.0);
}

double fidelity_low_rank(const CMat& rho, const CMat& V) {
  if (rho.rows() != V.rows()) throw DimensionError("fidelity_low_rank: dimension mismatch");
  const CMat g = hermitize(V.adjoint() * rho * V);
  Eigen::SelfAdjointEigenSolver<CMat> es(g, Eigen::EigenvaluesOnly);
  const double f = floored_sqrt(es.eigenvalues()).sum();
  return std::clamp(f, 0.0, 1.0);
}

double min_eigenvalue(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  return es.eigenvalues().minCoeff();
}

CMat embed(const CMat& rho, int dim) {
  if (dim < rho.rows()) throw DimensionError("embed: target dimension smaller than source");
  CMat out = CMat::Zero(dim, dim);
  out.topLeftCorner(rho.rows(), rho.cols()) = rho;
  return out;
}

CMat phonon_rotation(double theta, int dim) {
  CVec d(dim);
  for (int n = 0; n < dim; ++n) d(n) = std::polar(1.0, -theta * n);
  return d.asDiagonal();
}

}  // namespace catsim
