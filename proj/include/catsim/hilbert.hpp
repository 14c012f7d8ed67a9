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

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace catsim {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Error taxonomy shared by every module.
class CutoffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class StateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Truncated Fock space of one phonon mode, optionally tensored with a qubit.
// Basis order is qubit (x) phonon with qubit index {g=0, e=1}, so the joint
// index of |q, n> is q * (n_max + 1) + n.
class HilbertSpace {
 public:
  HilbertSpace(int n_max, bool has_qubit);
  static HilbertSpace qubit();

  int n_max() const { return n_max_; }
  bool has_qubit() const { return has_qubit_; }
  bool has_phonon() const { return has_phonon_; }
  int phonon_dim() const { return has_phonon_ ? n_max_ + 1 : 1; }
  int qubit_dim() const { return has_qubit_ ? 2 : 1; }
  int dim() const { return phonon_dim() * qubit_dim(); }

  HilbertSpace phonon_part() const;
  std::string describe() const;

  bool operator==(const HilbertSpace& other) const = default;

 private:
  HilbertSpace(int n_max, bool has_qubit, bool has_phonon);
  int n_max_;
  bool has_qubit_;
  bool has_phonon_;
};

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const std::string& what);

enum class StateKind { pure, mixed };
enum class Subsystem { qubit, phonon };

struct StateTolerance {
  double norm = 1e-9;
  double hermitian = 1e-12;
  double psd = 1e-9;
};

class JointState {
 public:
  static JointState pure(const HilbertSpace& space, CVec psi, const StateTolerance& tol = {},
                         double truncation_deficit = 0.0);
  static JointState mixed(const HilbertSpace& space, CMat rho, const StateTolerance& tol = {});

  const HilbertSpace& space() const { return space_; }
  StateKind kind() const { return kind_; }
  bool is_pure() const { return kind_ == StateKind::pure; }

  // Throws StateError for mixed states.
  const CVec& vector() const;
  // Density matrix; pure states are promoted.
  CMat density() const;
  // Probability mass lost to the cutoff before renormalization (0 if none).
  double truncation_deficit() const { return truncation_deficit_; }

 private:
  JointState(HilbertSpace space, StateKind kind) : space_(space), kind_(kind) {}
  HilbertSpace space_;
  StateKind kind_;
  CVec psi_;
  CMat rho_;
  double truncation_deficit_ = 0.0;
};

struct OperatorSet {
  HilbertSpace space;
  CMat a, a_dagger;
  CMat sigma_plus, sigma_minus, sigma_x, sigma_y, sigma_z;
  CMat number_op, parity_op;

  static OperatorSet build(const HilbertSpace& space);
  // D(beta) on the phonon factor, identity-padded on the qubit.
  CMat displacement(cplx beta) const;
};

// <m|D(gamma)|n> for 0 <= m, n < dim, exact (not the exponential of a
// truncated generator).
CMat displacement_elements(cplx gamma, int dim);
// Displaced parity D(beta) Pi D(beta)^dag restricted to dim, with
// Pi = diag(lambda^n). lambda = -1 is the ideal parity.
CMat displaced_parity(cplx beta, int dim, double lambda = -1.0);

int recommended_n_max(double abs_alpha);
// Exact amplitudes c_0 .. c_{count-1}, not renormalized.
CVec coherent_amplitudes(cplx alpha, int count);

JointState coherent_state(cplx alpha, const HilbertSpace& space);
JointState fock_state(int n, const HilbertSpace& space);
JointState tensor(const JointState& qubit, const JointState& phonon);
JointState partial_trace(const JointState& state, Subsystem keep);

double purity(const JointState& state);
double fidelity(const JointState& rho, const JointState& sigma);

// Matrix-level helpers. Inputs are assumed Hermitian; no PSD validation.
CMat hermitize(const CMat& m);
CMat psd_sqrt(const CMat& m);
double fidelity(const CMat& rho, const CMat& sigma);
double fidelity_pure(const CMat& rho, const CVec& psi);
// sigma = V V^dag with V of low column rank.
double fidelity_low_rank(const CMat& rho, const CMat& V);
double min_eigenvalue(const CMat& m);
CMat embed(const CMat& rho, int dim);
CMat phonon_rotation(double theta, int dim);

}  // namespace catsim
