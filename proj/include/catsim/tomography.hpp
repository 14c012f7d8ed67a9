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

#include <cstdint>
#include <utility>
#include <vector>

namespace catsim {

// Two-outcome parity readout: expected raw signal contrast * <Pi_beta> + offset.
// phonon_decay is kappa * T_readout; a non-zero value replaces Pi by
// diag((1 - 2 exp(-kappa T))^n), i.e. amplitude damping during the readout.
struct ReadoutModel {
  double contrast = 1.0;
  double offset = 0.0;
  int shots = 1000;
  std::uint64_t seed = 1;
  double phonon_decay = 0.0;

  void validate() const;
  double parity_lambda() const;
};

// Maps raw readout to parity: (raw - offset) / amplitude, clamped to [-1, 1].
struct ParityNormalization {
  double amplitude = 1.0;
  double offset = 0.0;
  bool applied = false;

  void validate() const;
  double apply(double raw) const;
};

// |beta| = C (exp(A / B) - 1)
struct DriveCalibration {
  double B = 1.0;
  double C = 1.0;
  double residual = 0.0;  // rms
  bool nonmonotone_warning = false;

  double beta_abs(double amplitude) const;
  double slope_at_zero() const { return C / B; }
};

struct WignerSampleSet {
  std::vector<cplx> betas;
  std::vector<double> measured_parities;
  int shots_per_point = 0;
  ParityNormalization normalization;

  void validate() const;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// <D(beta) Pi_lambda D(beta)^dag> for a phonon density matrix.
double expected_parity(const CMat& rho, cplx beta, double phonon_decay = 0.0);

// Empirical mean of `shots` +-1 outcomes at one displacement. The generator is
// seeded from (model.seed, point_index).
double simulate_parity_readout(const JointState& state, cplx beta, const ReadoutModel& model,
                               std::uint64_t point_index = 0);

// Ramsey-type calibration with the phonon in vacuum: sweeps the analysis
// phase, fits a cosine and returns the mapping that sends vacuum to +1.
ParityNormalization calibrate_parity(const ReadoutModel& model, int n_phases = 32, bool noiseless = false);

WignerSampleSet sample_wigner(const JointState& state, const std::vector<cplx>& betas,
                              const ReadoutModel& model, const ParityNormalization& normalization);

// Square raster of displacements, row-major by Im then Re.
std::vector<cplx> square_grid(double half_width, int n);

DriveCalibration calibrate_drive(const std::vector<std::pair<double, double>>& samples);

struct FockFit {
  std::vector<double> populations;  // p_0 .. p_{n_fit}
  double gamma_d = 0.0;
  double beta_abs = 0.0;            // Poisson fit
  double residual = 0.0;            // rms of the trace fit
  double condition_number = 0.0;    // of the design matrix at gamma_d
};

// Resonant Rabi trace of the qubit prepared in |e>:
// P_e(t) = sum_n p_n (1 + cos(2 g0 sqrt(n+1) t) exp(-gamma_d t)) / 2.
std::vector<double> fock_rabi_trace(const std::vector<double>& populations, double g0, double gamma_d,
                                    const std::vector<double>& times);
FockFit extract_fock_populations(const std::vector<double>& times, const std::vector<double>& pe, double g0,
                                 int n_fit);

struct MleOptions {
  int max_iters = 2000;
  double tol = 1e-10;
  double contrast = 1.0;
  double initial_dilution = 0.5;
  bool extrapolate = true;
};

struct MleResult {
  JointState state;
  std::vector<double> log_likelihood;  // per accepted iterate, starting with I/d
  int iterations = 0;
  bool converged = false;
};

// Iterative maximum-likelihood reconstruction from displaced-parity samples
// with binary POVMs E_pm = (I +- c D(beta) Pi D(beta)^dag) / 2 restricted to
// `space` (phonon-only).
MleResult mle_reconstruct(const WignerSampleSet& samples, const HilbertSpace& space,
                          const MleOptions& options = {});

}  // namespace catsim
