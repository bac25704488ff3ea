// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "daqsim/device.hpp"
#include "daqsim/statevector.hpp"

namespace daqsim {

/// Maps simulated time onto physical device time via J t = J_phys t_phys.
/// scale is the global ratio J / J_phys, identical for every edge of a
/// device-derived model.
struct TimeMap {
  double scale = 1.0;

  double to_phys(double t) const;    // t_phys = scale * t
  double from_phys(double t_phys) const;
};

struct ModelEdge {
  int i = 0;
  int j = 0;
  double j_coupling = 0.0;  // rad/s in the kHz-as-1e3-rad/s convention
};

/// Transverse-field Ising model with optional z disorder:
///   H = -sum_j h_j X_j - sum_<ij> J_ij Z_i Z_j + sum_j eps_j Z_j
struct SpinModel {
  int n_spins = 0;
  std::vector<double> h;            // x-field amplitudes, rad/s
  std::vector<double> eps;          // z-disorder amplitudes, rad/s
  std::vector<ModelEdge> edges;     // sorted (i < j, lexicographic)
  std::vector<int> device_qubits;   // device id per spin; empty = identity
  bool device_derived = false;
  TimeMap time_map;

  double coupling(int i, int j) const;  // 0 if (i,j) is not an edge
  double mean_coupling() const;
  bool has_disorder() const;

  /// Pauli term list of the Hamiltonian, for the dense oracle.
  std::vector<PauliTerm> pauli_terms() const;

  void validate() const;
};

struct model_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rule for assigning the x-field amplitudes h_j.
struct FieldRule {
  enum class Kind {
    UniformTwoJBar,  // every h_j = 2 * mean(J_ij)
    PerPairTwoJ,     // two-spin models only: h = 2 * J_01
    Explicit,
  };
  Kind kind = Kind::UniformTwoJBar;
  std::vector<double> values;  // used by Explicit

  static FieldRule uniform_2jbar() { return {Kind::UniformTwoJBar, {}}; }
  static FieldRule per_pair_2j() { return {Kind::PerPairTwoJ, {}}; }
  static FieldRule explicit_fields(std::vector<double> v) {
    return {Kind::Explicit, std::move(v)};
  }
};

struct DisorderSpec {
  double amplitude_factor = 2.0;  // eps ~ U[-factor*Jbar, +factor*Jbar]
  int realizations = 10;
  std::uint64_t seed = 0;
};

/// Builds the simulated model from a device: J_ij proportional to the chip's
/// couplings (scale 1 by default), h_j per rule, eps all zero.
SpinModel build_tfim(const DeviceModel& device, const FieldRule& rule,
                     const std::optional<DisorderSpec>& disorder = std::nullopt,
                     double scale = 1.0);

/// i.i.d. uniform on [-2*j_bar, +2*j_bar], deterministic per rng state.
std::vector<double> sample_disorder(double j_bar, int n_spins,
                                    std::mt19937_64& rng);

}  // namespace daqsim
