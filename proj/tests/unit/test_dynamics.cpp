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

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace catsim;

namespace {

const double kG0 = std::sqrt(2.0) / 0.9;

SystemParams closed(cplx alpha, cplx cg = 1.0, cplx ce = 0.0) {
  SystemParams p;
  p.g0 = kG0;
  p.alpha0 = alpha;
  p.c_g = cg;
  p.c_e = ce;
  return p;
}

// exp(-i H t) |psi0> by diagonalizing the JC Hamiltonian on a wider basis.
CVec jc_oracle(const SystemParams& p, double t, int pad) {
  const int d = p.cutoff() + 1 + pad;
  const HilbertSpace sp(d - 1, true);
  const OperatorSet ops = OperatorSet::build(sp);
  const CMat h = p.g0 * (ops.sigma_plus * ops.a + ops.sigma_minus * ops.a_dagger);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  CVec c = coherent_amplitudes(p.alpha0, d);
  CVec psi0(2 * d);
  psi0.head(d) = p.c_g * c;
  psi0.tail(d) = p.c_e * c;
  const CVec ph = (es.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint() * psi0;
}

// Twelve icosahedron vertices on the Bloch sphere as (c_g, c_e).
std::vector<std::pair<cplx, cplx>> bloch_grid() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<std::array<double, 3>> v;
  for (double s1 : {-1.0, 1.0})
    for (double s2 : {-1.0, 1.0}) {
      v.push_back({0.0, s1, s2 * phi});
      v.push_back({s1, s2 * phi, 0.0});
      v.push_back({s2 * phi, 0.0, s1});
    }
  std::vector<std::pair<cplx, cplx>> out;
  for (auto& x : v) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double th = std::acos(x[2] / r);
    const double az = std::atan2(x[1], x[0]);
    // sz = +1 is |e>.
    out.emplace_back(std::sin(th / 2.0), std::polar(std::cos(th / 2.0), -az));
  }
  return out;
}

}  // namespace

TEST_CASE("characteristic times") {
  const CharacteristicTimes ct = characteristic_times(closed(1.75));
  CHECK(ct.t_collapse == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(ct.t_R == doctest::Approx(2.0 * std::numbers::pi * 1.75 / kG0).epsilon(1e-12));
  CHECK(std::abs(ct.t_R - 6.6) / 6.6 < 0.10);
  CHECK(ct.t_C == doctest::Approx(ct.t_R / 2.0));
  CHECK(characteristic_times(closed(3.5)).t_R == doctest::Approx(2.0 * ct.t_R));
  CHECK_THROWS_AS(characteristic_times(closed(0.0)), std::invalid_argument);
}

TEST_CASE("exact evolution matches the diagonalized Hamiltonian") {
  for (auto [cg, ce] : {std::pair<cplx, cplx>{1.0, 0.0}, {0.0, 1.0}, {cplx(0.6, 0.0), cplx(0.0, 0.8)}}) {
    const SystemParams p = closed(cplx(1.75, 0.0), cg, ce);
    for (double t : {0.0, 0.7, 3.1, 6.9}) {
      const CVec exact = jc_evolve_exact(p, t).vector();
      const CVec ref = jc_oracle(p, t, 30);
      const int d = p.cutoff() + 1;
      const int D = d + 30;
      CVec r(2 * d);
      r.head(d) = ref.head(d);
      r.tail(d) = ref.segment(D, d);
      CHECK(std::abs(exact.dot(r)) > 1.0 - 1e-10);
    }
  }
}

TEST_CASE("excited population") {
  SUBCASE("vacuum Rabi oscillation") {
    const auto t = linspace(0.0, 5.0, 51);
    const auto pe = excited_population(closed(0.0, 0.0, 1.0), t);
    for (size_t k = 0; k < t.size(); ++k) CHECK(std::abs(pe[k] - std::pow(std::cos(kG0 * t[k]), 2)) < 1e-12);
  }
  SUBCASE("ground state with vacuum stays dark") {
    for (double v : excited_population(closed(0.0), linspace(0.0, 5.0, 21))) CHECK(v == 0.0);
  }
  SUBCASE("Poisson series and reduced-state agreement") {
    const SystemParams p = closed(1.75);
    const auto t = linspace(0.0, 8.0, 81);
    const auto pe = excited_population(p, t);
    const Trajectory tr = jc_trajectory(p, t);
    for (size_t k = 0; k < t.size(); ++k) {
      double s = 0.0, pn = std::exp(-1.75 * 1.75);
      for (int n = 1; n < 200; ++n) {
        pn *= 1.75 * 1.75 / n;
        s += pn * std::pow(std::sin(kG0 * std::sqrt(static_cast<double>(n)) * t[k]), 2);
      }
      CHECK(std::abs(pe[k] - s) < 1e-10);
      CHECK(std::abs(pe[k] - tr.observable("P_e")[k]) < 1e-10);
      CHECK(pe[k] >= 0.0);
      CHECK(pe[k] <= 1.0);
    }
  }
  SUBCASE("+X and -X give identical traces") {
    const double s = 1.0 / std::sqrt(2.0);
    const auto t = linspace(0.0, 10.0, 101);
    const auto a = excited_population(closed(1.75, s, s), t);
    const auto b = excited_population(closed(1.75, s, -s), t);
    double mean = 0.0;
    for (size_t k = 0; k < t.size(); ++k) {
      CHECK(std::abs(a[k] - b[k]) < 1e-12);
      mean += a[k] / t.size();
    }
    CHECK(std::abs(mean - 0.5) < 0.05);
    for (double v : excited_population_envelope(closed(4.0, s, s), t, EnvelopeForm::leading_order).values) {
      CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  SUBCASE("collapse and revival near the predicted times") {
    const SystemParams p = closed(1.75);
    const auto t = linspace(0.0, 12.0, 1201);
    const auto pe = excited_population(p, t);
    const CharacteristicTimes ct = characteristic_times(p);
    std::vector<double> te, pe2;
    for (size_t k = 0; k < t.size() && t[k] <= 2.5; ++k) {
      te.push_back(t[k]);
      pe2.push_back(pe[k]);
    }
    const CollapseFit cf = fit_collapse(te, pe2, 0.9, 2.0 * kG0 * 1.75);
    CHECK(std::abs(cf.tau - 0.9) / 0.9 < 0.05);
    const double tr = revival_time_estimate(t, pe, ct.t_R);
    CHECK(tr > 6.3);
    CHECK(tr < 7.4);
  }
  SUBCASE("cutoff guard") {
    SystemParams p = closed(3.0);
    p.n_max = 20;
    CHECK_THROWS_AS(excited_population(p, {0.0}), CutoffError);
    CHECK_THROWS_AS(jc_evolve_exact(p, 0.0), CutoffError);
  }
}

TEST_CASE("energy conservation along closed evolution") {
  const SystemParams p = closed(cplx(1.2, 0.5), 0.6, cplx(0.0, 0.8));
  const Trajectory tr = jc_trajectory(p, linspace(0.0, 10.0, 41));
  const double e0 = tr.observable("sz")[0] / 2.0 + tr.observable("n_mean")[0];
  for (size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(std::abs(tr.observable("sz")[k] / 2.0 + tr.observable("n_mean")[k] - e0) < 1e-8);
  }
}

TEST_CASE("t = 0 returns the product state") {
  const SystemParams p = closed(cplx(0.9, 0.4), 0.6, cplx(0.0, 0.8));
  const JointState s = jc_evolve_exact(p, 0.0);
  const JointState ref = tensor(qubit_state(p.c_g, p.c_e), coherent_state(p.alpha0, p.phonon_space()));
  CHECK((s.vector() - ref.vector()).norm() < 1e-12);
}

TEST_CASE("closed-form envelope") {
  SUBCASE("accuracy against the exact series for alpha = 5") {
    const SystemParams p = closed(5.0, 0.0, 1.0);
    const double tr = characteristic_times(p).t_R;
    const auto t = linspace(0.0, tr / 3.0, 2001);
    const auto exact = excited_population(p, t);
    const Envelope env = excited_population_envelope(p, t);
    CHECK_FALSE(env.outside_validity);
    double worst = 0.0;
    for (size_t k = 0; k < t.size(); ++k) worst = std::max(worst, std::abs(exact[k] - env.values[k]));
    CHECK(worst < 0.02);
  }
  SUBCASE("initial value and Gaussian damping") {
    const SystemParams p = closed(4.0, 0.0, 1.0);
    const double tc = std::sqrt(2.0) / kG0;
    const auto lo = excited_population_envelope(p, {0.0, tc}, EnvelopeForm::leading_order).values;
    CHECK(lo[0] == doctest::Approx(1.0));
    // 2 g0 alpha t_c = 2 sqrt(2) alpha; the cosine factor is removed to read the envelope.
    const double c = std::cos(2.0 * kG0 * 4.0 * tc);
    CHECK((2.0 * lo[1] - 1.0) / c == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(excited_population_envelope(closed(2.0), {0.0}).outside_validity);
  }
}

TEST_CASE("cat-time qubit state is universal for alpha = 4") {
  const JointState target = cat_time_qubit_state();
  for (auto [cg, ce] : bloch_grid()) {
    const SystemParams p = closed(4.0, cg, ce);
    const JointState q = partial_trace(jc_evolve_exact(p, characteristic_times(p).t_C), Subsystem::qubit);
    CHECK(fidelity(q, target) > 0.99);
  }
}

TEST_CASE("phi states") {
  SUBCASE("t = 0 gives the coherent state") {
    const auto [a, b] = phi_states(closed(1.5), 0.0);
    const JointState c = coherent_state(1.5, closed(1.5).phonon_space());
    CHECK(fidelity(a, c) > 1.0 - 1e-12);
    CHECK(fidelity(b, c) > 1.0 - 1e-12);
  }
  SUBCASE("short-time rotation") {
    const SystemParams p = closed(6.0);
    const double t = 0.05 * 6.0 / kG0;
    const auto [a, b] = phi_states(p, t);
    const double ang = kG0 * t / (2.0 * 6.0);
    CHECK(fidelity(a, coherent_state(std::polar(6.0, -ang), p.phonon_space())) > 0.999);
    CHECK(fidelity(b, coherent_state(std::polar(6.0, ang), p.phonon_space())) > 0.999);
  }
  SUBCASE("maximal separation at t_C") {
    const SystemParams p = closed(6.0);
    const auto [a, b] = phi_states(p, characteristic_times(p).t_C);
    CHECK(std::norm(a.vector().dot(b.vector())) < 0.01);
  }
  CHECK_THROWS_AS(phi_states(closed(cplx(1.0, 1.0)), 0.1), std::invalid_argument);
}

TEST_CASE("Lindblad evolution") {
  SUBCASE("closed-system limit") {
    SystemParams p = closed(1.75);
    const double tc = characteristic_times(p).t_C;
    const JointState init = tensor(qubit_state(1.0, 0.0), coherent_state(1.75, p.phonon_space()));
    const Trajectory tr = lindblad_evolve(init, p, true, {tc});
    const double f = fidelity(tr.states.back(), jc_evolve_exact(p, tc));
    CHECK(f * f > 1.0 - 1e-6);
  }
  SUBCASE("damped coherent state") {
    SystemParams p = closed(0.0);
    p.kappa_phonon = 0.05;
    p.n_max = 25;
    const cplx a0(1.5, 0.8);
    const HilbertSpace sp(25, false);
    const auto times = linspace(0.0, 20.0, 11);
    const Trajectory tr = lindblad_evolve(coherent_state(a0, sp), p, false, times);
    const OperatorSet ops = OperatorSet::build(sp);
    for (size_t k = 0; k < times.size(); ++k) {
      const cplx at = a0 * std::exp(-0.5 * p.kappa_phonon * times[k]);
      const CMat r = tr.states[k].density();
      CHECK(std::abs((r * ops.a).trace() - at) < 1e-6);
      CHECK(fidelity(tr.states[k], coherent_state(at, sp)) > 1.0 - 1e-6);
      CHECK(std::abs(r.trace() - 1.0) < 1e-8);
      CHECK(min_eigenvalue(r) > -1e-7);
    }
  }
  SUBCASE("tighter tolerance reduces the error against the analytic solution") {
    SystemParams p = closed(0.0);
    p.kappa_phonon = 0.1;
    p.n_max = 25;
    const HilbertSpace sp(25, false);
    const cplx a0(2.0, 0.0);
    auto error = [&](double rtol) {
      const Trajectory tr = lindblad_evolve(coherent_state(a0, sp), p, false, {10.0}, {rtol * 1e-2, rtol, true});
      const CVec ref = coherent_state(a0 * std::exp(-0.5), sp).vector();
      return (tr.states.back().density() - ref * ref.adjoint()).norm();
    };
    const double e1 = error(1e-6);
    const double e2 = error(1e-9);
    CHECK(e2 < e1 / 10.0);
  }
  SUBCASE("positivity along a noisy joint trajectory") {
    SystemParams p = closed(1.5);
    p.kappa_phonon = 0.05;
    p.gamma_qubit = 0.1;
    p.gamma_phi = 0.1;
    const JointState init = tensor(qubit_state(0.6, 0.8), coherent_state(1.5, p.phonon_space()));
    const Trajectory tr = lindblad_evolve(init, p, true, linspace(0.5, 6.0, 12));
    for (const JointState& s : tr.states) {
      CHECK(min_eigenvalue(s.density()) > -1e-7);
      CHECK(std::abs(s.density().trace() - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("revival contrast") {
  SUBCASE("large alpha approaches the asymptotic value") {
    const double limit = std::pow(1.0 + std::numbers::pi * std::numbers::pi, -0.25);
    double prev_gap = 1.0;
    for (double a : {6.0, 8.0, 10.0}) {
      const SystemParams p = closed(a);
      const double tr = characteristic_times(p).t_R;
      const Trajectory traj = jc_trajectory(p, linspace(0.8 * tr, 1.2 * tr, 1601));
      const double c = revival_contrast(traj, p);
      CHECK(c >= 0.45);
      CHECK(c <= 0.60);
      const double gap = std::abs(c - limit);
      CHECK(gap <= prev_gap + 1e-3);
      prev_gap = gap;
    }
  }
  SUBCASE("vacuum Rabi has full contrast") {
    const Trajectory traj = jc_trajectory(closed(0.0, 0.0, 1.0), linspace(0.0, 5.0, 501));
    CHECK(revival_contrast(traj, closed(0.0)) == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("phonon damping lowers the contrast") {
    double prev = 2.0;
    for (double kappa : {0.0, 0.01, 0.05}) {
      SystemParams p = closed(3.0);
      p.kappa_phonon = kappa;
      const double tr = characteristic_times(p).t_R;
      const JointState init = tensor(qubit_state(1.0, 0.0), coherent_state(3.0, p.phonon_space()));
      LindbladOptions o;
      o.keep_states = false;
      const Trajectory traj = lindblad_evolve(init, p, true, linspace(0.8 * tr, 1.2 * tr, 241), o);
      const double c = revival_contrast(traj, tr);
      CHECK(c < prev);
      prev = c;
    }
  }
  SUBCASE("window must be covered") {
    const SystemParams p = closed(2.0);
    const Trajectory traj = jc_trajectory(p, linspace(0.0, 5.0, 51));
    CHECK_THROWS_AS(revival_contrast(traj, p), std::invalid_argument);
  }
}
