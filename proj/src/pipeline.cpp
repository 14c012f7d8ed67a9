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

#include "catsim/pipeline.hpp"

#include <stdexcept>

namespace catsim {

std::vector<DriveSetting> default_drive_settings() {
  return {{0.25, 1.5, 2.0}, {0.30, 1.6, 2.4}, {0.35, 1.75, 2.9}};
}

void PipelineConfig::validate() const {
  if (!(g0 > 0.0)) throw std::invalid_argument("pipeline: g0 must be positive");
  if (!(kappa_phonon >= 0.0) || !(gamma_qubit >= 0.0) || !(gamma_phi >= 0.0)) {
    throw std::invalid_argument("pipeline: rates must be >= 0");
  }
  if (n_max < 1 || reconstruction_n_max < 1) throw std::invalid_argument("pipeline: cutoffs must be >= 1");
  if (grid_points < 2 || !(grid_half_width > 0.0)) throw std::invalid_argument("pipeline: invalid tomography grid");
  if (slice_points < 2 || !(slice_half_width > 0.0)) throw std::invalid_argument("pipeline: invalid slice");
  if (wait_times.size() < 4) throw std::invalid_argument("pipeline: at least 4 wait times are needed");
  for (size_t i = 1; i < wait_times.size(); ++i) {
    if (!(wait_times[i] > wait_times[i - 1])) throw std::invalid_argument("pipeline: wait times must increase");
  }
  readout.validate();
}

SystemParams PipelineConfig::system(const DriveSetting& s) const {
  SystemParams p;
  p.g0 = g0;
  p.alpha0 = s.alpha;
  p.kappa_phonon = kappa_phonon;
  p.gamma_qubit = gamma_qubit;
  p.gamma_phi = gamma_phi;
  p.n_max = n_max;
  p.validate();
  return p;
}

JointState prepare_cat(const PipelineConfig& cfg, const DriveSetting& setting) {
  cfg.validate();
  if (!(setting.t_C > 0.0)) throw std::invalid_argument("prepare_cat: t_C must be positive");
  const SystemParams p = cfg.system(setting);
  const HilbertSpace space = p.joint_space();
  const JointState init = tensor(qubit_state(1.0, 0.0), coherent_state(setting.alpha, space.phonon_part()));
  LindbladOptions opts;
  opts.keep_states = true;
  const Trajectory traj = lindblad_evolve(init, p, true, {setting.t_C}, opts);
  return partial_trace(traj.states.back(), Subsystem::phonon);
}

FreeDecay free_decay_negativity(const PipelineConfig& cfg, const JointState& phonon_state) {
  cfg.validate();
  if (phonon_state.space().has_qubit()) throw DimensionError("free_decay_negativity: phonon state expected");
  SystemParams p;
  p.g0 = cfg.g0;
  p.kappa_phonon = cfg.kappa_phonon;
  p.n_max = phonon_state.space().n_max();
  LindbladOptions opts;
  opts.keep_states = true;
  const Trajectory traj = lindblad_evolve(phonon_state, p, false, cfg.wait_times, opts);
  const WignerGrid slice =
      WignerGrid::slice(cplx(-cfg.slice_half_width, 0.0), cplx(cfg.slice_half_width, 0.0), cfg.slice_points);
  FreeDecay out;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out.taus.push_back(traj.times[i]);
    out.deltas.push_back(negativity(wigner(traj.states[i], slice)));
  }
  out.fit = fit_negativity_decay(out.taus, out.deltas);
  return out;
}

PipelineResult run_tomography_pipeline(const PipelineConfig& cfg, const DriveSetting& setting,
                                       bool with_intervals) {
  const JointState prepared = prepare_cat(cfg, setting);
  const ParityNormalization norm = calibrate_parity(cfg.readout);
  const WignerSampleSet samples =
      sample_wigner(prepared, square_grid(cfg.grid_half_width, cfg.grid_points), cfg.readout, norm);
  const HilbertSpace recon_space(cfg.reconstruction_n_max, false);
  MleResult mle = mle_reconstruct(samples, recon_space, cfg.mle);

  const CMat rho = mle.state.density();
  const CMat truth = prepared.density();
  const int big = static_cast<int>(std::max(rho.rows(), truth.rows()));
  const double f_true = fidelity(embed(rho, big), embed(truth, big));

  const AnalyticalTargetSpec spec{1.0, 0.0, setting.t_C, cfg.g0};
  const AnalyticalFit af = fit_analytical(mle.state, spec);
  const CssFit cf = fit_css(mle.state);
  SensitivityInterval ai, ci;
  if (with_intervals) {
    ai = sensitivity_interval(mle.state, af, spec, cfg.sensitivity_drop);
    ci = sensitivity_interval(mle.state, cf, cfg.sensitivity_drop);
  }
  return PipelineResult{setting, prepared, samples, norm, std::move(mle), f_true, af, ai, cf, ci};
}

}  // namespace catsim
