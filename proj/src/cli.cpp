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

#include "catsim/cli.hpp"

#include "catsim/acoustics.hpp"
#include "catsim/io.hpp"
#include "catsim/parallel.hpp"
#include "catsim/pipeline.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#ifndef CATSIM_VERSION
#define CATSIM_VERSION "0.0.0"
#endif

namespace catsim::cli {

namespace {

using io::ConfigError;
using io::ConfigReader;
using io::json;

constexpr int kSchemaVersion = 1;

struct Context {
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  bool quiet = false;
  std::ostream* out = nullptr;
  std::vector<std::string> written;

  void write(const std::string& name, const std::string& content) {
    const std::filesystem::path p = std::filesystem::path(out_dir) / name;
    io::write_file(p.string(), content);
    written.push_back(p.string());
  }
};

// ---- config sections -------------------------------------------------------

SystemParams read_system(ConfigReader r, double default_alpha) {
  SystemParams p;
  p.g0 = r.number("g0", p.g0);
  p.alpha0 = r.complex("alpha", default_alpha);
  p.c_g = r.complex("c_g", p.c_g);
  p.c_e = r.complex("c_e", p.c_e);
  p.kappa_phonon = r.number("kappa_phonon", 0.0);
  p.gamma_qubit = r.number("gamma_qubit", 0.0);
  p.gamma_phi = r.number("gamma_phi", 0.0);
  p.n_max = r.integer("n_max", 0);
  r.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(r.field(""), e.what());
  }
  return p;
}

std::vector<double> read_times(ConfigReader r, double start, double stop, int count) {
  start = r.number("start", start);
  stop = r.number("stop", stop);
  count = r.integer("count", count);
  r.finish();
  if (count < 2) throw ConfigError(r.field("count"), "must be >= 2");
  if (!(stop > start) || start < 0.0) throw ConfigError(r.field("stop"), "need 0 <= start < stop");
  return linspace(start, stop, count);
}

ReadoutModel read_readout(ConfigReader r, const ReadoutModel& d) {
  ReadoutModel m = d;
  m.contrast = r.number("contrast", m.contrast);
  m.offset = r.number("offset", m.offset);
  m.shots = r.integer("shots", m.shots);
  m.seed = r.unsigned_integer("seed", m.seed);
  m.phonon_decay = r.number("phonon_decay", m.phonon_decay);
  r.finish();
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(r.field(""), e.what());
  }
  return m;
}

PipelineConfig read_pipeline(ConfigReader r) {
  PipelineConfig c;
  c.g0 = r.number("g0", c.g0);
  c.kappa_phonon = r.number("kappa_phonon", c.kappa_phonon);
  c.gamma_qubit = r.number("gamma_qubit", c.gamma_qubit);
  c.gamma_phi = r.number("gamma_phi", c.gamma_phi);
  c.n_max = r.integer("n_max", c.n_max);
  c.readout = read_readout(r.child("readout"), c.readout);
  c.grid_half_width = r.number("grid_half_width", c.grid_half_width);
  c.grid_points = r.integer("grid_points", c.grid_points);
  c.reconstruction_n_max = r.integer("reconstruction_n_max", c.reconstruction_n_max);
  {
    ConfigReader m = r.child("mle");
    c.mle.max_iters = m.integer("max_iters", c.mle.max_iters);
    c.mle.tol = m.number("tol", c.mle.tol);
    c.mle.initial_dilution = m.number("initial_dilution", c.mle.initial_dilution);
    c.mle.extrapolate = m.boolean("extrapolate", c.mle.extrapolate);
    m.finish();
  }
  if (r.has("wait_times")) c.wait_times = read_times(r.child("wait_times"), 0.0, 40.0, 21);
  else r.child("wait_times");
  c.slice_half_width = r.number("slice_half_width", c.slice_half_width);
  c.slice_points = r.integer("slice_points", c.slice_points);
  c.sensitivity_drop = r.number("sensitivity_drop", c.sensitivity_drop);
  r.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(r.field(""), e.what());
  }
  return c;
}

DriveSetting read_setting(ConfigReader r, const DriveSetting& d) {
  DriveSetting s = d;
  s.drive_amplitude = r.number("drive_amplitude", s.drive_amplitude);
  s.alpha = r.number("alpha", s.alpha);
  s.t_C = r.number("t_C", s.t_C);
  r.finish();
  if (!(s.alpha >= 0.0)) throw ConfigError(r.field("alpha"), "must be >= 0");
  if (!(s.t_C > 0.0)) throw ConfigError(r.field("t_C"), "must be positive");
  return s;
}

WignerGrid read_grid(ConfigReader r, const std::string& default_layout) {
  const std::string layout = r.string("layout", default_layout);
  const double hw = r.number("half_width", 3.5);
  if (!(hw > 0.0)) throw ConfigError(r.field("half_width"), "must be positive");
  WignerGrid g;
  if (layout == "raster") {
    const int n = r.integer("points", 81);
    if (n < 2) throw ConfigError(r.field("points"), "must be >= 2");
    g = WignerGrid::raster(-hw, hw, n, -hw, hw, n);
  } else if (layout == "slice") {
    const int n = r.integer("points", 101);
    const double im = r.number("im", 0.0);
    if (n < 2) throw ConfigError(r.field("points"), "must be >= 2");
    g = WignerGrid::slice(cplx(-hw, im), cplx(hw, im), n);
  } else {
    throw ConfigError(r.field("layout"), "expected \"raster\" or \"slice\"");
  }
  r.finish();
  return g;
}

json vector_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

// ---- subcommands -----------------------------------------------------------

void cmd_simulate(ConfigReader& root, Context& ctx) {
  const SystemParams p = read_system(root.child("system"), 1.75);
  const std::vector<double> times = read_times(root.child("times"), 0.0, 15.0, 601);
  const bool open = root.boolean("open_system", false);
  const bool envelope = root.boolean("envelope", false);
  root.finish();

  Trajectory traj;
  if (open) {
    const HilbertSpace space = p.joint_space();
    const JointState init = tensor(qubit_state(p.c_g, p.c_e), coherent_state(p.alpha0, space.phonon_part()));
    LindbladOptions o;
    o.keep_states = false;
    traj = lindblad_evolve(init, p, true, times, o);
  } else {
    traj = jc_trajectory(p, times);
  }
  ctx.write("trajectory.csv", io::trajectory_csv(traj));

  json summary;
  summary["cutoff_n_max"] = p.cutoff();
  summary["open_system"] = open;
  if (std::abs(p.alpha0) > 0.0) {
    const CharacteristicTimes ct = characteristic_times(p);
    summary["characteristic_times"] = io::to_json(ct);
    const std::vector<double>& pe = traj.observable("P_e");
    if (times.back() >= 1.5 * ct.t_R) summary["revival_time_estimate"] = revival_time_estimate(times, pe, ct.t_R);
    if (times.front() <= 0.8 * ct.t_R && times.back() >= 1.2 * ct.t_R) {
      summary["revival_contrast"] = revival_contrast(traj, ct.t_R);
    }
    if (times.front() == 0.0 && times.back() >= 2.5) {
      std::vector<double> t2, p2;
      for (size_t i = 0; i < times.size() && times[i] <= 2.5; ++i) {
        t2.push_back(times[i]);
        p2.push_back(pe[i]);
      }
      if (t2.size() >= 8) {
        const CollapseFit cf = fit_collapse(t2, p2, ct.t_collapse, 2.0 * p.g0 * std::abs(p.alpha0));
        summary["collapse_fit"] = json{{"tau", cf.tau},           {"omega", cf.omega},
                                       {"amplitude", cf.amplitude}, {"baseline", cf.baseline},
                                       {"residual", cf.residual}};
      }
    }
  }
  if (envelope) {
    const Envelope env = excited_population_envelope(p, times);
    std::ostringstream os;
    os << "t,P_e_envelope\n";
    for (size_t i = 0; i < times.size(); ++i) {
      os << io::format_double(times[i]) << ',' << io::format_double(env.values[i]) << '\n';
    }
    ctx.write("envelope.csv", os.str());
    summary["envelope_outside_validity"] = env.outside_validity;
  }
  ctx.write("summary.json", io::dump(summary));
}

void cmd_qubit_phase_scan(ConfigReader& root, Context& ctx) {
  SystemParams p = read_system(root.child("system"), 1.75);
  const std::vector<double> times = read_times(root.child("times"), 0.0, 10.0, 201);
  const int count = root.integer("phase_count", 24);
  const double polar = root.number("polar_angle", 0.5 * std::numbers::pi);
  root.finish();
  if (count < 1) throw ConfigError("phase_count", "must be >= 1");

  std::vector<Trajectory> trajs(static_cast<size_t>(count));
  std::vector<double> fid(static_cast<size_t>(count), 0.0);
  std::vector<double> phases(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) phases[k] = 2.0 * std::numbers::pi * k / count;
  const bool has_tc = std::abs(p.alpha0) > 0.0;
  const JointState target = cat_time_qubit_state();
  parallel_for(phases.size(), [&](size_t k) {
    SystemParams q = p;
    q.c_g = std::cos(0.5 * polar);
    q.c_e = std::polar(std::sin(0.5 * polar), phases[k]);
    trajs[k] = jc_trajectory(q, times);
    if (has_tc) {
      const JointState qs = partial_trace(jc_evolve_exact(q, characteristic_times(q).t_C), Subsystem::qubit);
      fid[k] = fidelity(qs, target);
    }
  });

  std::ostringstream os;
  os << "phase,t,P_e,sx,sy,sz,purity\n";
  for (size_t k = 0; k < phases.size(); ++k) {
    const Trajectory& tr = trajs[k];
    for (size_t i = 0; i < tr.times.size(); ++i) {
      os << io::format_double(phases[k]) << ',' << io::format_double(tr.times[i]);
      for (const char* c : {"P_e", "sx", "sy", "sz", "purity"}) os << ',' << io::format_double(tr.observable(c)[i]);
      os << '\n';
    }
  }
  ctx.write("qubit_phase_scan.csv", os.str());
  json summary;
  summary["phases"] = vector_json(phases);
  if (has_tc) {
    summary["t_C"] = characteristic_times(p).t_C;
    summary["cat_time_fidelity_to_minus_y"] = vector_json(fid);
  }
  ctx.write("summary.json", io::dump(summary));
}

void cmd_wigner(ConfigReader& root, Context& ctx) {
  const PipelineConfig cfg = read_pipeline(root.child("pipeline"));
  const DriveSetting s = read_setting(root.child("setting"), default_drive_settings().back());
  const bool open = root.boolean("open_system", true);
  WignerGrid grid = read_grid(root.child("grid"), "raster");
  root.finish();

  JointState phonon = [&]() {
    if (open) return prepare_cat(cfg, s);
    SystemParams p = cfg.system(s);
    return partial_trace(jc_evolve_exact(p, s.t_C), Subsystem::phonon);
  }();
  grid = wigner(phonon, std::move(grid));
  ctx.write("wigner.csv", io::wigner_csv(grid));
  json summary;
  summary["integral"] = integrate(grid);
  summary["negativity"] = negativity(grid);
  summary["flagged_points"] = grid.flagged_count();
  summary["phonon_purity"] = purity(phonon);
  ctx.write("summary.json", io::dump(summary));
}

void cmd_tomo(ConfigReader& root, Context& ctx, bool seed_given) {
  PipelineConfig cfg = read_pipeline(root.child("pipeline"));
  const DriveSetting s = read_setting(root.child("setting"), default_drive_settings().back());
  const bool intervals = root.boolean("intervals", true);
  root.finish();
  if (seed_given) cfg.readout.seed = ctx.seed;

  const PipelineResult r = run_tomography_pipeline(cfg, s, intervals);
  ctx.write("samples.csv", io::samples_csv(r.samples));
  ctx.write("density_matrix.json", io::dump(io::density_to_json(r.reconstruction.state.density())));
  json fits;
  fits["setting"] = json{{"drive_amplitude", s.drive_amplitude}, {"alpha", s.alpha}, {"t_C", s.t_C}};
  fits["normalization"] = io::to_json(r.normalization);
  fits["mle"] = json{{"iterations", r.reconstruction.iterations},
                     {"converged", r.reconstruction.converged},
                     {"final_log_likelihood", r.reconstruction.log_likelihood.back()}};
  fits["fidelity_to_prepared"] = r.reconstruction_fidelity;
  fits["analytical"] = io::to_json(r.analytical);
  fits["css"] = io::to_json(r.css);
  if (intervals) {
    fits["analytical_interval"] = io::to_json(r.analytical_interval);
    fits["css_interval"] = io::to_json(r.css_interval);
  }
  ctx.write("fits.json", io::dump(fits));
}

void cmd_decay(ConfigReader& root, Context& ctx) {
  const std::string mode = root.string("mode", "analytic");
  std::ostringstream csv;
  csv << "label,tau,delta\n";
  json fits = json::array();
  auto emit = [&](const std::string& label, const std::vector<double>& taus, const std::vector<double>& deltas,
                  const NegativityDecayFit& f, json extra) {
    for (size_t i = 0; i < taus.size(); ++i) {
      csv << label << ',' << io::format_double(taus[i]) << ',' << io::format_double(deltas[i]) << '\n';
    }
    extra["label"] = label;
    extra["fit"] = io::to_json(f);
    fits.push_back(std::move(extra));
  };

  if (mode == "analytic") {
    const cplx alpha = root.complex("alpha", 2.5);
    const double t1 = root.number("t1_phonon", 84.0);
    const std::vector<double> varthetas = root.numbers("varthetas", {0.0});
    const std::vector<double> taus = read_times(root.child("wait_times"), 0.0, 40.0, 41);
    const WignerGrid grid = read_grid(root.child("grid"), "raster");
    root.finish();
    if (!(t1 > 0.0)) throw ConfigError("t1_phonon", "must be positive");
    if (varthetas.empty()) throw ConfigError("varthetas", "must not be empty");
    for (size_t k = 0; k < varthetas.size(); ++k) {
      const NegativitySweep sw = analytic_negativity_sweep(alpha, t1, varthetas[k], taus, grid);
      emit("vartheta" + std::to_string(k), sw.taus, sw.deltas, sw.fit,
           json{{"vartheta", varthetas[k]}, {"tau_cat_large_alpha", tau_cat_large_alpha(alpha, t1)}});
    }
  } else if (mode == "pipeline") {
    const PipelineConfig cfg = read_pipeline(root.child("pipeline"));
    std::vector<DriveSetting> settings;
    const std::vector<DriveSetting> defaults = default_drive_settings();
    if (root.has("settings")) {
      for (ConfigReader c : root.children("settings")) settings.push_back(read_setting(c, defaults.back()));
    } else {
      root.children("settings");
      settings = defaults;
    }
    root.finish();
    if (settings.empty()) throw ConfigError("settings", "must not be empty");
    for (size_t k = 0; k < settings.size(); ++k) {
      const FreeDecay fd = free_decay_negativity(cfg, prepare_cat(cfg, settings[k]));
      emit("setting" + std::to_string(k), fd.taus, fd.deltas, fd.fit,
           json{{"drive_amplitude", settings[k].drive_amplitude},
                {"alpha", settings[k].alpha},
                {"t_C", settings[k].t_C}});
    }
  } else {
    throw ConfigError("mode", "expected \"analytic\" or \"pipeline\"");
  }
  ctx.write("decay.csv", csv.str());
  ctx.write("fits.json", io::dump(json{{"mode", mode}, {"fits", fits}}));
}

void cmd_mass(ConfigReader& root, Context& ctx) {
  AcousticMode mode;
  {
    ConfigReader r = root.child("mode");
    mode.w0_um = r.number("w0_um", mode.w0_um);
    mode.L_um = r.number("L_um", mode.L_um);
    mode.lambda_um = r.number("lambda_um", mode.lambda_um);
    mode.m = r.integer("m", mode.m);
    mode.p = r.integer("p", mode.p);
    mode.l = r.integer("l", mode.l);
    mode.c33 = r.number("c33", mode.c33);
    mode.density = r.number("density", mode.density);
    r.finish();
    try {
      mode = mode.normalized();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(r.field(""), e.what());
    }
  }
  const std::vector<double> alphas = root.numbers("alphas", {0.0, 1.61});
  root.finish();

  std::ostringstream csv;
  csv << "convention,alpha,S0,M0_ug,M_eff_ug,x_zpf_m,x_eff_m,separation_m\n";
  json models = json::array();
  for (MassConvention c : {MassConvention::max, MassConvention::rms}) {
    if (c == MassConvention::max && mode.l != 0) continue;
    const MassModel mm = mass_model(mode, c);
    json mj = io::to_json(mm);
    json dl = json::array();
    for (double a : alphas) {
      if (!(a >= 0.0)) throw ConfigError("alphas", "entries must be >= 0");
      const Delocalization d = delocalization(mm, a);
      csv << to_string(c) << ',' << io::format_double(a) << ',' << io::format_double(mm.S0) << ','
          << io::format_double(mm.M0_ug) << ',' << io::format_double(mm.M_eff_ug) << ','
          << io::format_double(mm.x_zpf_m) << ',' << io::format_double(d.x_eff_m) << ','
          << io::format_double(d.separation_m) << '\n';
      dl.push_back(json{{"alpha", a}, {"x_eff_m", d.x_eff_m}, {"separation_m", d.separation_m}});
    }
    mj["delocalization"] = dl;
    models.push_back(mj);
  }
  json summary{{"m", mode.m},
               {"lambda_um", mode.lambda_um},
               {"rayleigh_length_um", mode.rayleigh_length_um()},
               {"sound_speed", mode.sound_speed()},
               {"lg_rms_over_2w0_disk", lg_rms_over_disk(mode, 2.0 * mode.w0_um)},
               {"half_wavelength_mass_ng", half_wavelength_mass_ng(mode)},
               {"models", models}};
  ctx.write("mass.csv", csv.str());
  ctx.write("mass.json", io::dump(summary));
}

void cmd_calibrate(ConfigReader& root, Context& ctx) {
  json result;
  // Parity normalization from a Ramsey phase sweep with the phonon in vacuum.
  {
    ConfigReader r = root.child("parity");
    ReadoutModel m;
    m.contrast = r.number("contrast", 0.7);
    m.offset = r.number("offset", 0.0);
    m.shots = r.integer("shots", 10000);
    const int n_phases = r.integer("n_phases", 32);
    r.finish();
    m.seed = derive_seed(ctx.seed, 1);
    try {
      m.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(r.field(""), e.what());
    }
    const ParityNormalization n = calibrate_parity(m, n_phases);
    json j = io::to_json(n);
    j["recovered_contrast"] = n.amplitude;
    result["parity"] = j;
  }
  // Drive model from synthetic (A, |beta|) pairs with relative noise.
  {
    ConfigReader r = root.child("drive");
    const double B = r.number("B", 0.5);
    const double C = r.number("C", 0.9);
    const double noise = r.number("noise", 0.01);
    const std::vector<double> amps = r.numbers("amplitudes", linspace(0.05, 0.5, 10));
    r.finish();
    if (!(B > 0.0) || !(C > 0.0)) throw ConfigError(r.field("B"), "B and C must be positive");
    if (!(noise >= 0.0)) throw ConfigError(r.field("noise"), "must be >= 0");
    std::mt19937_64 rng(derive_seed(ctx.seed, 2));
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<std::pair<double, double>> samples;
    for (double a : amps) samples.emplace_back(a, C * std::expm1(a / B) * (1.0 + noise * nd(rng)));
    const DriveCalibration dc = calibrate_drive(samples);
    result["drive"] = io::to_json(dc);
    result["drive"]["slope_at_zero"] = dc.slope_at_zero();
  }
  // Fock populations from a resonant Rabi trace of a coherent state.
  {
    ConfigReader r = root.child("fock");
    const double alpha = r.number("alpha", 1.3);
    const double g0 = r.number("g0", std::sqrt(2.0) / 0.9);
    const double gamma_d = r.number("gamma_d", 0.2);
    const double noise = r.number("noise", 0.01);
    const int n_fit = r.integer("n_fit", 10);
    const std::vector<double> times = read_times(r.child("times"), 0.0, 12.0, 241);
    r.finish();
    if (n_fit < 1) throw ConfigError(r.field("n_fit"), "must be >= 1");
    const CVec c = coherent_amplitudes(alpha, n_fit + 1);
    std::vector<double> pops(static_cast<size_t>(n_fit + 1));
    for (int n = 0; n <= n_fit; ++n) pops[n] = std::norm(c(n));
    std::vector<double> pe = fock_rabi_trace(pops, g0, gamma_d, times);
    std::mt19937_64 rng(derive_seed(ctx.seed, 3));
    std::normal_distribution<double> nd(0.0, noise);
    for (double& v : pe) v += noise > 0.0 ? nd(rng) : 0.0;
    const FockFit ff = extract_fock_populations(times, pe, g0, n_fit);
    result["fock"] = json{{"populations", vector_json(ff.populations)},
                          {"gamma_d", ff.gamma_d},
                          {"beta_abs", ff.beta_abs},
                          {"residual", ff.residual},
                          {"condition_number", ff.condition_number}};
    std::ostringstream os;
    os << "t,P_e\n";
    for (size_t i = 0; i < times.size(); ++i) os << io::format_double(times[i]) << ',' << io::format_double(pe[i]) << '\n';
    ctx.write("fock_trace.csv", os.str());
  }
  root.finish();
  ctx.write("calibration.json", io::dump(result));
}

}  // namespace

std::string schema() {
  const json system{{"g0", "number, rad/us (default sqrt(2)/0.9)"},
                    {"alpha", "number or [re, im] (default 1.75)"},
                    {"c_g", "number or [re, im] (default 1)"},
                    {"c_e", "number or [re, im] (default 0)"},
                    {"kappa_phonon", "number, 1/us (default 0)"},
                    {"gamma_qubit", "number, 1/us (default 0)"},
                    {"gamma_phi", "number, 1/us (default 0)"},
                    {"n_max", "integer, 0 selects the recommended cutoff (default 0)"}};
  const json times{{"start", "number, us"}, {"stop", "number, us"}, {"count", "integer >= 2"}};
  const json grid{{"layout", "\"raster\" or \"slice\""},
                  {"half_width", "number (default 3.5)"},
                  {"points", "integer per axis (default 81 raster, 101 slice)"},
                  {"im", "number, slice only (default 0)"}};
  const json readout{{"contrast", "number in (0, 1] (default 1)"},
                     {"offset", "number (default 0)"},
                     {"shots", "integer >= 1 (default 1000)"},
                     {"seed", "unsigned integer (default 7; --seed overrides in tomo)"},
                     {"phonon_decay", "number >= 0, kappa * T_readout (default 0.15)"}};
  const json pipeline{{"g0", "number (default sqrt(2)/0.9)"},
                      {"kappa_phonon", "number (default 1/84)"},
                      {"gamma_qubit", "number (default 1/15)"},
                      {"gamma_phi", "number (default 1/30)"},
                      {"n_max", "integer (default 24)"},
                      {"readout", readout},
                      {"grid_half_width", "number (default 2.5)"},
                      {"grid_points", "integer per axis (default 15)"},
                      {"reconstruction_n_max", "integer (default 13)"},
                      {"mle", json{{"max_iters", "integer (default 1000)"},
                                   {"tol", "number (default 1e-10)"},
                                   {"initial_dilution", "number (default 0.5)"},
                                   {"extrapolate", "boolean (default true)"}}},
                      {"wait_times", times},
                      {"slice_half_width", "number (default 3.5)"},
                      {"slice_points", "integer (default 101)"},
                      {"sensitivity_drop", "number (default 0.01)"}};
  const json setting{{"drive_amplitude", "number (default 0.35)"},
                     {"alpha", "number >= 0 (default 1.75)"},
                     {"t_C", "number, us (default 2.9)"}};
  json s;
  s["schema_version"] = kSchemaVersion;
  s["common"] = json{{"schema_version", "integer, required in config files, must equal 1"},
                     {"flags", "--config PATH, --seed N, --out DIR, --quiet"},
                     {"env", "CATSIM_THREADS caps worker threads"},
                     {"exit_codes", json{{"0", "ok"}, {"1", "usage"}, {"2", "config"}, {"3", "numerical"}}}};
  s["commands"] = json{
      {"simulate", json{{"system", system}, {"times", times}, {"open_system", "boolean (default false)"},
                        {"envelope", "boolean (default false)"},
                        {"outputs", json::array({"trajectory.csv", "summary.json", "envelope.csv"})}}},
      {"qubit-phase-scan", json{{"system", system}, {"times", times}, {"phase_count", "integer (default 24)"},
                                {"polar_angle", "number, rad (default pi/2)"},
                                {"outputs", json::array({"qubit_phase_scan.csv", "summary.json"})}}},
      {"wigner", json{{"pipeline", pipeline}, {"setting", setting}, {"open_system", "boolean (default true)"},
                      {"grid", grid}, {"outputs", json::array({"wigner.csv", "summary.json"})}}},
      {"tomo", json{{"pipeline", pipeline}, {"setting", setting}, {"intervals", "boolean (default true)"},
                    {"outputs", json::array({"samples.csv", "density_matrix.json", "fits.json"})}}},
      {"decay", json{{"mode", "\"analytic\" or \"pipeline\" (default analytic)"},
                     {"alpha", "analytic: number or [re, im] (default 2.5)"},
                     {"t1_phonon", "analytic: number, us (default 84)"},
                     {"varthetas", "analytic: array of numbers (default [0])"},
                     {"wait_times", times},
                     {"grid", grid},
                     {"pipeline", pipeline},
                     {"settings", json::array({setting})},
                     {"outputs", json::array({"decay.csv", "fits.json"})}}},
      {"mass", json{{"mode", json{{"w0_um", "number (default 27)"},
                                  {"L_um", "number (default 435)"},
                                  {"lambda_um", "number (default 1.7)"},
                                  {"m", "integer, 0 derives round(2L/lambda)"},
                                  {"p", "integer (default 0)"},
                                  {"l", "integer (default 0)"},
                                  {"c33", "number, Pa (default 4.0464e11)"},
                                  {"density", "number, kg/m^3 (default 3980)"}}},
                    {"alphas", "array of numbers (default [0, 1.61])"},
                    {"outputs", json::array({"mass.csv", "mass.json"})}}},
      {"calibrate", json{{"parity", json{{"contrast", "number (default 0.7)"},
                                         {"offset", "number (default 0)"},
                                         {"shots", "integer (default 10000)"},
                                         {"n_phases", "integer (default 32)"}}},
                         {"drive", json{{"B", "number (default 0.5)"},
                                        {"C", "number (default 0.9)"},
                                        {"noise", "relative noise (default 0.01)"},
                                        {"amplitudes", "array of numbers"}}},
                         {"fock", json{{"alpha", "number (default 1.3)"},
                                       {"g0", "number"},
                                       {"gamma_d", "number (default 0.2)"},
                                       {"noise", "additive noise (default 0.01)"},
                                       {"n_fit", "integer (default 10)"},
                                       {"times", times}}},
                         {"outputs", json::array({"calibration.json", "fock_trace.csv"})}}}};
  return io::dump(s);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"catsim: qubit-phonon cat-state simulation and analysis"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  bool show_schema = false;
  app.add_flag("--version", show_version, "Print the version and exit");
  app.add_flag("--schema", show_schema, "Print the config schema and exit");

  struct Opts {
    std::string config;
    std::uint64_t seed = 1;
    std::string out = ".";
    bool quiet = false;
  } opts;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"simulate", "Collapse and revival trajectories"},
      {"qubit-phase-scan", "Qubit observables versus initial qubit phase"},
      {"wigner", "Wigner function of a prepared cat"},
      {"tomo", "Parity sampling, reconstruction and cat fits"},
      {"decay", "Negativity versus wait time"},
      {"mass", "Acoustic effective mass and delocalization table"},
      {"calibrate", "Parity, drive and Fock-population calibrations"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sc = app.add_subcommand(name, help);
    sc->add_option("--config", opts.config, "JSON config file")->check(CLI::ExistingFile);
    sc->add_option("--seed", opts.seed, "Random seed");
    sc->add_option("--out", opts.out, "Output directory");
    sc->add_flag("--quiet", opts.quiet, "Suppress progress output");
    subs.push_back(sc);
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (show_version) {
    out << "catsim " << CATSIM_VERSION << '\n';
    return kExitOk;
  }
  if (show_schema) {
    out << schema();
    return kExitOk;
  }
  CLI::App* chosen = nullptr;
  for (CLI::App* sc : subs) {
    if (sc->parsed()) chosen = sc;
  }
  if (!chosen) {
    err << app.help();
    return kExitUsage;
  }
  const std::string name = chosen->get_name();
  const bool seed_given = chosen->count("--seed") > 0;

  Context ctx;
  ctx.out_dir = opts.out;
  ctx.seed = opts.seed;
  ctx.quiet = opts.quiet;
  ctx.out = &out;
  try {
    json config = json::object();
    const bool from_file = !opts.config.empty();
    if (from_file) config = io::parse_config(io::read_file(opts.config), opts.config);
    ConfigReader root(config, "");
    if (from_file) {
      const int v = root.integer("schema_version");
      if (v != kSchemaVersion) throw ConfigError("schema_version", "unsupported version " + std::to_string(v));
    }
    std::filesystem::create_directories(ctx.out_dir);
    if (name == "simulate") cmd_simulate(root, ctx);
    else if (name == "qubit-phase-scan") cmd_qubit_phase_scan(root, ctx);
    else if (name == "wigner") cmd_wigner(root, ctx);
    else if (name == "tomo") cmd_tomo(root, ctx, seed_given);
    else if (name == "decay") cmd_decay(root, ctx);
    else if (name == "mass") cmd_mass(root, ctx);
    else cmd_calibrate(root, ctx);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CutoffError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  if (!ctx.quiet) {
    for (const std::string& w : ctx.written) out << "wrote " << w << '\n';
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace catsim::cli
