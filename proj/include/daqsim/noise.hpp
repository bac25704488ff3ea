// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "daqsim/compiler.hpp"
#include "daqsim/device.hpp"
#include "daqsim/statevector.hpp"

namespace daqsim {

/// Trajectory noise configuration. Negative cnot_depol / readout_flip mean
/// "use the device default".
struct NoiseModel {
  bool enable_t1 = true;
  bool enable_t2 = true;
  double cnot_depol = -1.0;        // device.gates.cnot_error when < 0
  bool crosstalk_during_gates = true;
  double readout_flip = -1.0;      // device.gates.readout_error when < 0
  double dt_noise_ns = 100.0;      // chunk size for the non-uniform-T1 path
  double crosstalk_scale = 1.0;

  static NoiseModel noiseless();
  double effective_cnot_depol(const DeviceModel& dev) const;
  double effective_readout_flip(const DeviceModel& dev) const;
  void validate() const;
};

/// Aggregated measurement outcomes of a batch of trajectories. The ordered
/// map makes iteration (and hence serialization) deterministic.
struct RunResult {
  int n_qubits = 0;
  std::uint64_t n_runs = 0;
  std::uint64_t master_seed = 0;
  std::map<std::uint64_t, std::uint64_t> counts;

  /// Empirical outcome distribution over all 2^n basis states (n <= 24).
  std::vector<double> probabilities() const;
};

struct noise_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-trajectory seed derivation (splitmix64 over master ^ index).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// One ZZ term per device edge with both endpoints simulated, in local
/// indices: theta = -J_phys * d * scale in the engine's angular convention.
std::vector<ZZTerm> crosstalk_phase_for(const DeviceModel& device,
                                        const std::vector<int>& device_ids,
                                        double d_s, double scale = 1.0);

/// Single-qubit stochastic decoherence over one interval: exact two-outcome
/// amplitude-damping unravelling (jump / no-jump with renormalization)
/// followed by a dephasing z-flip with p = (1 - e^{-d/T_phi}) / 2,
/// 1/T_phi = 1/T2 - 1/(2 T1). Infinite t1/t2 disable the respective part.
void apply_decoherence_interval(StateVector& psi, int qubit, double d_s,
                                double t1_s, double t2_s,
                                std::mt19937_64& rng);

/// Evolves one trajectory through the schedule (stopping before measurement
/// sampling) and returns the final normalized state.
StateVector propagate_one(const Schedule& schedule, const DeviceModel& device,
                          const NoiseModel& noise, std::uint64_t seed,
                          const StateVector* initial = nullptr);

/// Runs n_runs independent trajectories, one measurement sample each.
/// Trajectory r uses derive_seed(master_seed, r); the result is independent
/// of n_threads.
RunResult run_trajectories(const Schedule& schedule, const DeviceModel& device,
                           const NoiseModel& noise, std::uint64_t n_runs,
                           std::uint64_t master_seed,
                           const StateVector* initial = nullptr,
                           int n_threads = 1);

}  // namespace daqsim
