// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "daqsim/compiler.hpp"
#include "daqsim/device.hpp"
#include "daqsim/model.hpp"
#include "daqsim/noise.hpp"

using namespace daqsim;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Small chip with uniform (or per-qubit) coherence and no couplings.
DeviceModel bare_device(std::vector<double> t1_us, std::vector<double> t2_us) {
  DeviceModel dev;
  dev.name = "bare";
  for (std::size_t q = 0; q < t1_us.size(); ++q) {
    dev.qubits.push_back({static_cast<int>(q), t1_us[q], t2_us[q]});
  }
  dev.gates = {50.0, 100.0, 300.0, 0.0, 0.0};
  dev.validate();
  return dev;
}

Schedule idle_schedule(int n, double t_s) {
  Schedule s;
  s.n_qubits = n;
  if (t_s > 0.0) s.moments.push_back(Moment::idle(t_s));
  s.moments.push_back(Moment::measure());
  return s;
}

double excited_fraction(const RunResult& rr, int qubit) {
  std::uint64_t hits = 0;
  for (const auto& [idx, c] : rr.counts) {
    if (idx & (std::uint64_t{1} << qubit)) hits += c;
  }
  return static_cast<double>(hits) / static_cast<double>(rr.n_runs);
}

}  // namespace

TEST_CASE("derive_seed is deterministic and spreads indices") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("noise model validation") {
  NoiseModel nm;
  CHECK_NOTHROW(nm.validate());
  nm.cnot_depol = 1.5;
  CHECK_THROWS_AS(nm.validate(), noise_error);
  nm = NoiseModel{};
  nm.readout_flip = 2.0;
  CHECK_THROWS_AS(nm.validate(), noise_error);
  nm = NoiseModel{};
  nm.dt_noise_ns = 0.0;
  CHECK_THROWS_AS(nm.validate(), noise_error);
  nm = NoiseModel{};
  nm.crosstalk_scale = -1.0;
  CHECK_THROWS_AS(nm.validate(), noise_error);

  NoiseModel off = NoiseModel::noiseless();
  CHECK_FALSE(off.enable_t1);
  CHECK_FALSE(off.enable_t2);
  CHECK(off.cnot_depol == 0.0);
  CHECK(off.readout_flip == 0.0);
  CHECK_FALSE(off.crosstalk_during_gates);

  DeviceModel dev = device_preset("qx2-like");
  NoiseModel defaults;
  CHECK(defaults.effective_cnot_depol(dev) == dev.gates.cnot_error);
  CHECK(defaults.effective_readout_flip(dev) == dev.gates.readout_error);
  defaults.cnot_depol = 0.01;
  CHECK(defaults.effective_cnot_depol(dev) == 0.01);
}

TEST_CASE("crosstalk phase terms: values, linearity, subsetting") {
  DeviceModel dev = device_preset("qx2-like");
  const std::vector<int> ids = {0, 1, 2};
  const double d = 2e-6;
  auto terms = crosstalk_phase_for(dev, ids, d);
  // Edges among {0,1,2} on this chip: (0,1), (0,2), (1,2).
  CHECK(terms.size() == 3);
  for (const auto& t : terms) {
    const int a = ids[t.i], b = ids[t.j];
    CHECK(t.theta ==
          doctest::Approx(-khz_to_rad_per_s(dev.j_khz(a, b)) * d)
              .epsilon(1e-12));
  }
  auto zero = crosstalk_phase_for(dev, ids, 0.0);
  for (const auto& t : zero) CHECK(t.theta == 0.0);
  auto twice = crosstalk_phase_for(dev, ids, 2.0 * d);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    CHECK(twice[k].theta == doctest::Approx(2.0 * terms[k].theta));
  }
  auto scaled = crosstalk_phase_for(dev, ids, d, 0.25);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    CHECK(scaled[k].theta == doctest::Approx(0.25 * terms[k].theta));
  }
  // Qubits 3 and 4 are not simulated: edges touching them are dropped.
  auto pair = crosstalk_phase_for(dev, {0, 1}, d);
  CHECK(pair.size() == 1);
}

TEST_CASE("noiseless trajectories reproduce the pure-state propagation") {
  DeviceModel dev = device_preset("qx2-like");
  SpinModel m = build_tfim(dev, FieldRule::uniform_2jbar());
  const double t = 1.2 / m.mean_coupling();
  const NoiseModel off = NoiseModel::noiseless();
  for (const Schedule& s : {trotterize_digital(m, t, 4, &dev),
                            trotterize_da(m, dev, t, 4)}) {
    StateVector ref(m.n_spins);
    apply_schedule_noiseless(ref, s, &dev, false);
    StateVector traj = propagate_one(s, dev, off, 12345);
    CHECK(state_distance(ref, traj) < 1e-12);
  }
  // Identical seeds give identical counts.
  Schedule s = trotterize_da(m, dev, t, 4);
  RunResult a = run_trajectories(s, dev, off, 2000, 7);
  RunResult b = run_trajectories(s, dev, off, 2000, 7);
  CHECK(a.counts == b.counts);
  RunResult c = run_trajectories(s, dev, off, 2000, 8);
  CHECK(a.counts != c.counts);
}

TEST_CASE("trajectory counts are independent of the thread count") {
  DeviceModel dev = device_preset("qx2-like");
  SpinModel m = build_tfim(dev, FieldRule::uniform_2jbar());
  const double t = 1.0 / m.mean_coupling();
  Schedule s = trotterize_da(m, dev, t, 3);
  NoiseModel nm;  // full device noise
  RunResult one = run_trajectories(s, dev, nm, 1500, 99, nullptr, 1);
  RunResult three = run_trajectories(s, dev, nm, 1500, 99, nullptr, 3);
  CHECK(one.counts == three.counts);
}

TEST_CASE("uniform-T1 relaxation follows exp(-t/T1)") {
  // T2 = 2 T1 turns off pure dephasing; couplings absent.
  const double t1 = 40.0;
  DeviceModel dev = bare_device({t1, t1}, {2 * t1, 2 * t1});
  const double t = 25e-6;
  StateVector init = StateVector::basis(2, 0b11);
  NoiseModel nm;
  RunResult rr =
      run_trajectories(idle_schedule(2, t), dev, nm, 10000, 31, &init);
  const double p = std::exp(-t / us_to_s(t1));
  const double sigma = std::sqrt(p * (1 - p) / 10000.0);
  for (int q = 0; q < 2; ++q) {
    CHECK(std::abs(excited_fraction(rr, q) - p) < 5.0 * sigma);
  }
}

TEST_CASE("non-uniform T1 (chunked path) decays per qubit") {
  const double t1a = 30.0, t1b = 60.0;
  DeviceModel dev = bare_device({t1a, t1b}, {2 * t1a, 2 * t1b});
  const double t = 20e-6;
  StateVector init = StateVector::basis(2, 0b11);
  NoiseModel nm;
  RunResult rr =
      run_trajectories(idle_schedule(2, t), dev, nm, 10000, 77, &init);
  for (const auto& [q, t1] : {std::pair{0, t1a}, std::pair{1, t1b}}) {
    const double p = std::exp(-t / us_to_s(t1));
    const double sigma = std::sqrt(p * (1 - p) / 10000.0);
    CHECK(std::abs(excited_fraction(rr, q) - p) < 5.0 * sigma);
  }
}

TEST_CASE("single-interval decoherence channel matches the analytic map") {
  // Average the stochastic unravelling and compare against the exact
  // amplitude-damping + dephasing channel on a fixed pure state.
  const double t1 = 30e-6, t2 = 40e-6, d = 12e-6;
  const double gamma = 1.0 - std::exp(-d / t1);
  const double tphi = 1.0 / (1.0 / t2 - 0.5 / t1);
  StateVector base(1);
  base.apply_1q(0, gate_ry(1.1));  // cos(.55)|0> + sin(.55)|1>
  const Eigen::Matrix2cd rho0 = base.partial_trace_single(0);
  Eigen::Matrix2cd expect;
  expect(0, 0) = rho0(0, 0) + gamma * rho0(1, 1);
  expect(1, 1) = (1.0 - gamma) * rho0(1, 1);
  expect(0, 1) = rho0(0, 1) * std::sqrt(1.0 - gamma) * std::exp(-d / tphi);
  expect(1, 0) = std::conj(expect(0, 1));

  std::mt19937_64 rng(2024);
  Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    StateVector psi = base;
    apply_decoherence_interval(psi, 0, d, t1, t2, rng);
    acc += psi.partial_trace_single(0);
  }
  acc /= static_cast<double>(n);
  CHECK((acc - expect).cwiseAbs().maxCoeff() < 3e-3);
}

TEST_CASE("decoherence interval edge cases") {
  std::mt19937_64 rng(5);
  StateVector psi(1);
  psi.apply_1q(0, gate_h());
  StateVector ref = psi;
  // Zero duration and infinite coherence leave the state untouched.
  apply_decoherence_interval(psi, 0, 0.0, 30e-6, 40e-6, rng);
  CHECK(state_distance(psi, ref) < 1e-14);
  apply_decoherence_interval(psi, 0, 5e-6, kInf, kInf, rng);
  CHECK(state_distance(psi, ref) < 1e-14);
  // Invalid arguments.
  CHECK_THROWS(apply_decoherence_interval(psi, 0, -1.0, 30e-6, 40e-6, rng));
  CHECK_THROWS(apply_decoherence_interval(psi, 0, 1e-6, 30e-6, 90e-6, rng));
  CHECK_THROWS(apply_decoherence_interval(psi, 0, 1e-6, 0.0, 0.0, rng));
}

TEST_CASE("pure dephasing decays <X> as exp(-d/T2) when T1 is infinite") {
  const double t2 = 25e-6, d = 15e-6;
  std::mt19937_64 rng(404);
  double mean_x = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    StateVector psi(1);
    psi.apply_1q(0, gate_h());
    apply_decoherence_interval(psi, 0, d, kInf, t2, rng);
    const auto rho = psi.partial_trace_single(0);
    mean_x += 2.0 * rho(0, 1).real();
  }
  mean_x /= n;
  CHECK(mean_x == doctest::Approx(std::exp(-d / t2)).epsilon(0.02));
}

TEST_CASE("idle crosstalk changes phases only, never populations") {
  DeviceModel dev = device_preset("qx2-like");
  NoiseModel nm = NoiseModel::noiseless();  // keep the coherent crosstalk
  Schedule s = idle_schedule(5, 30e-6);
  for (std::uint64_t basis : {0ull, 5ull, 31ull}) {
    StateVector init = StateVector::basis(5, basis);
    RunResult rr = run_trajectories(s, dev, nm, 500, 3, &init);
    CHECK(rr.counts.size() == 1);
    CHECK(rr.counts.begin()->first == basis);
  }
  // On a superposition the accumulated phase matches the direct application.
  StateVector plus(2);
  plus.apply_1q(0, gate_h());
  plus.apply_1q(1, gate_h());
  Schedule s2 = idle_schedule(2, 7e-6);
  StateVector out = propagate_one(s2, dev, nm, 1, &plus);
  StateVector ref = plus;
  ref.apply_zz_phase(crosstalk_phase_for(dev, {0, 1}, 7e-6));
  CHECK(state_distance(out, ref) < 1e-12);
}

TEST_CASE("full CNOT depolarizing noise scrambles as 15 uniform Paulis") {
  DeviceModel dev = bare_device({1e6, 1e6}, {1e6, 1e6});
  NoiseModel nm = NoiseModel::noiseless();
  nm.cnot_depol = 1.0;
  Schedule s;
  s.n_qubits = 2;
  s.moments.push_back(Moment::cnot(0, 1, 0.0));
  s.moments.push_back(Moment::measure());
  RunResult rr = run_trajectories(s, dev, nm, 30000, 13);
  // Each qubit flips iff its Pauli is X or Y: 8 of the 15 non-identity pairs.
  const double p = 8.0 / 15.0;
  const double sigma = std::sqrt(p * (1 - p) / 30000.0);
  CHECK(std::abs(excited_fraction(rr, 0) - p) < 5.0 * sigma);
  CHECK(std::abs(excited_fraction(rr, 1) - p) < 5.0 * sigma);
  // P(00) = |{(I,Z),(Z,I),(Z,Z)}| / 15.
  const double p00 = 3.0 / 15.0;
  const double s00 = std::sqrt(p00 * (1 - p00) / 30000.0);
  const double f00 =
      static_cast<double>(rr.counts.at(0)) / static_cast<double>(rr.n_runs);
  CHECK(std::abs(f00 - p00) < 5.0 * s00);
}

TEST_CASE("readout flips invert deterministic outcomes at p = 1") {
  DeviceModel dev = bare_device({1e6, 1e6}, {1e6, 1e6});
  NoiseModel nm = NoiseModel::noiseless();
  nm.readout_flip = 1.0;
  Schedule s = idle_schedule(2, 0.0);
  RunResult rr = run_trajectories(s, dev, nm, 100, 55);
  CHECK(rr.counts.size() == 1);
  CHECK(rr.counts.begin()->first == 0b11);
}

TEST_CASE("probabilities() normalizes the counts") {
  RunResult rr;
  rr.n_qubits = 2;
  rr.n_runs = 8;
  rr.counts = {{0, 4}, {3, 4}};
  auto p = rr.probabilities();
  REQUIRE(p.size() == 4);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == 0.0);
  CHECK(p[3] == doctest::Approx(0.5));
}
