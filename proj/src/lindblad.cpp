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

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <sstream>

namespace catsim {

namespace {

using State = std::vector<double>;

// The density matrix is packed column-major as interleaved (re, im) pairs so
// that Eigen can map the raw buffer as a complex matrix.
struct LindbladRhs {
  CMat h_eff;
  std::vector<CMat> jumps;
  std::vector<CMat> jumps_dag;
  int dim;

  void operator()(const State& x, State& dxdt, double /*t*/) const {
    Eigen::Map<const CMat> rho(reinterpret_cast<const cplx*>(x.data()), dim, dim);
    Eigen::Map<CMat> out(reinterpret_cast<cplx*>(dxdt.data()), dim, dim);
    const cplx mi(0.0, -1.0);
    // -i (H rho - rho H^dag) = -i H rho + (-i H rho)^dag for Hermitian rho.
    CMat hr = mi * (h_eff * rho);
    out = hr + hr.adjoint();
    for (size_t k = 0; k < jumps.size(); ++k) out.noalias() += jumps[k] * rho * jumps_dag[k];
    out = 0.5 * (out + out.adjoint()).eval();
  }
};

}  // namespace

Trajectory lindblad_evolve(const JointState& initial, const SystemParams& params, bool hamiltonian_on,
                           const std::vector<double>& times, const LindbladOptions& options) {
  params.validate();
  if (times.empty()) throw std::invalid_argument("lindblad_evolve: no output times");
  for (size_t k = 0; k < times.size(); ++k) {
    if (times[k] < 0.0 || (k > 0 && !(times[k] > times[k - 1]))) {
      throw std::invalid_argument("lindblad_evolve: times must be non-negative and strictly increasing");
    }
  }
  const HilbertSpace& sp = initial.space();
  if (!sp.has_phonon()) throw DimensionError("lindblad_evolve: state needs a phonon factor");
  const OperatorSet ops = OperatorSet::build(sp);
  const int d = sp.dim();

  CMat h = CMat::Zero(d, d);
  if (hamiltonian_on && sp.has_qubit()) {
    h = params.g0 * (ops.sigma_plus * ops.a + ops.sigma_minus * ops.a_dagger);
  }
  LindbladRhs rhs{h, {}, {}, d};
  auto add_jump = [&](const CMat& c, double rate) {
    if (rate <= 0.0) return;
    rhs.jumps.push_back(std::sqrt(rate) * c);
    rhs.jumps_dag.push_back(rhs.jumps.back().adjoint());
  };
  add_jump(ops.a, params.kappa_phonon);
  if (sp.has_qubit()) {
    add_jump(ops.sigma_minus, params.gamma_qubit);
    add_jump(ops.sigma_z, 0.5 * params.gamma_phi);
  }
  const cplx half_i(0.0, 0.5);
  for (const CMat& c : rhs.jumps) rhs.h_eff -= half_i * (c.adjoint() * c);

  State x(static_cast<size_t>(2 * d * d));
  {
    Eigen::Map<CMat> rho(reinterpret_cast<cplx*>(x.data()), d, d);
    rho = hermitize(initial.density());
  }

  std::vector<double> grid;
  grid.reserve(times.size() + 1);
  const bool prepend = times.front() > 0.0;
  if (prepend) grid.push_back(0.0);
  grid.insert(grid.end(), times.begin(), times.end());

  Trajectory traj;
  traj.times = times;
  const StateTolerance tol{1e-8, 1e-12, 1e-7};
  size_t seen = 0;
  auto observer = [&](const State& s, double t) {
    if (prepend && seen++ == 0) return;
    Eigen::Map<const CMat> rho(reinterpret_cast<const cplx*>(s.data()), d, d);
    CMat r = hermitize(rho);
    JointState js = [&]() {
      try {
        return JointState::mixed(sp, std::move(r), tol);
      } catch (const StateError& e) {
        std::ostringstream os;
        os << "lindblad_evolve: invalid state at t = " << t << ": " << e.what()
           << " (atol " << options.atol << ", rtol " << options.rtol << ")";
        throw NumericalError(os.str());
      }
    }();
    append_observables(traj, js);
    if (options.keep_states) traj.states.push_back(std::move(js));
  };

  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_dense_output(options.atol, options.rtol, ode::runge_kutta_dopri5<State>());
  const double span = grid.back() - grid.front();
  const double dt0 = span > 0.0 ? std::min(1e-3, span / 10.0) : 1e-3;
  try {
    if (grid.size() == 1) {
      observer(x, grid.front());
    } else {
      ode::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), dt0, observer,
                           ode::max_step_checker(100000));
    }
  } catch (const ode::step_adjustment_error& e) {
    throw NumericalError(std::string("lindblad_evolve: step-size control failed: ") + e.what());
  } catch (const ode::no_progress_error& e) {
    throw NumericalError(std::string("lindblad_evolve: integration stalled: ") + e.what());
  } catch (const std::overflow_error& e) {
    throw NumericalError(std::string("lindblad_evolve: step limit exceeded: ") + e.what());
  }
  return traj;
}

}  // namespace catsim
