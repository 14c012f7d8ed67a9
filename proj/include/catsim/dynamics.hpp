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

#include "catsim/hilbert.hpp"

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace catsim {

// Times in microseconds, rates in 1/us, g0 in rad/us.
struct SystemParams {
  double g0 = std::sqrt(2.0) / 0.9;
  cplx alpha0 = 0.0;
  cplx c_g = 1.0;
  cplx c_e = 0.0;
  double kappa_phonon = 0.0;
  double gamma_qubit = 0.0;
  double gamma_phi = 0.0;
  int n_max = 0;  // 0: recommended_n_max(|alpha0|)

  void validate() const;
  int cutoff() const;
  HilbertSpace joint_space() const { return HilbertSpace(cutoff(), true); }
  HilbertSpace phonon_space() const { return HilbertSpace(cutoff(), false); }
};

struct CharacteristicTimes {
  double t_collapse;
  double t_R;
  double t_C;
};

CharacteristicTimes characteristic_times(const SystemParams& params);

inline constexpr std::array<const char*, 6> kObservableNames = {"P_e", "sx", "sy", "sz", "purity",
                                                                "n_mean"};

struct Trajectory {
  std::vector<double> times;
  std::vector<JointState> states;  // may be empty when states are not retained
  std::map<std::string, std::vector<double>> observables;

  const std::vector<double>& observable(const std::string& name) const;
};

// Observables of one state. Qubit entries are NaN for phonon-only states;
// "purity" is the reduced-qubit purity when a qubit is present.
std::map<std::string, double> observables_of(const JointState& state);
void append_observables(Trajectory& traj, const JointState& state);

// Qubit-resolved phonon branches of the closed-system state:
// |Psi(t)> = |g>|psi_g> + |e>|psi_e>.
struct JcBranches {
  CVec psi_g;
  CVec psi_e;
};

JcBranches jc_branches(const SystemParams& params, double t);
// Same, without the cutoff guard and on an explicit basis size. Used by fits
// that explore amplitudes freely.
JcBranches jc_branches_unchecked(cplx alpha, cplx c_g, cplx c_e, double g0, double t, int dim);

JointState jc_evolve_exact(const SystemParams& params, double t);
std::vector<double> excited_population(const SystemParams& params, const std::vector<double>& times);
Trajectory jc_trajectory(const SystemParams& params, const std::vector<double>& times,
                         bool keep_states = false);

enum class EnvelopeForm { mean_frequency, leading_order };

struct Envelope {
  std::vector<double> values;
  bool outside_validity = false;  // |alpha| < 3
};

Envelope excited_population_envelope(const SystemParams& params, const std::vector<double>& times,
                                     EnvelopeForm form = EnvelopeForm::mean_frequency);

// Phi_pm(t) = sum_n c_n exp(-+ i g0 t sqrt(n)) |n>, normalized.
std::pair<JointState, JointState> phi_states(const SystemParams& params, double t);

// (|g> - i|e>)/sqrt(2), the qubit state reached at the cat time.
JointState cat_time_qubit_state();
JointState qubit_state(cplx c_g, cplx c_e);

struct LindbladOptions {
  double atol = 1e-10;
  double rtol = 1e-8;
  bool keep_states = true;
};

// Collapse channels sqrt(kappa) a, sqrt(gamma) sigma_-, sqrt(gamma_phi/2) sigma_z
// (qubit channels only when the space has a qubit).
Trajectory lindblad_evolve(const JointState& initial, const SystemParams& params, bool hamiltonian_on,
                           const std::vector<double>& times, const LindbladOptions& options = {});

// Peak-to-trough P_e within [0.8 t_R, 1.2 t_R]. A non-positive or non-finite
// t_R selects the whole trajectory.
double revival_contrast(const Trajectory& traj, double t_R);
double revival_contrast(const Trajectory& traj, const SystemParams& params);

// Revival time estimated as the power-weighted centroid of (P_e - mean)^2 on
// [t_R/2, 3 t_R/2] of a sampled trace.
double revival_time_estimate(const std::vector<double>& times, const std::vector<double>& pe,
                             double t_R_guess);

struct CollapseFit {
  double tau;
  double omega;
  double amplitude;
  double baseline;
  double residual;
};

// Least-squares fit of B + A exp(-(t/tau)^2) cos(omega t + phi) on the early
// part of a trace.
CollapseFit fit_collapse(const std::vector<double>& times, const std::vector<double>& pe,
                         double tau_guess, double omega_guess);

std::vector<double> linspace(double start, double stop, int count);

}  // namespace catsim
