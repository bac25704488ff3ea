// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace daqsim {

// Unit conventions used throughout:
//   couplings in kHz, coherence times in microseconds, gate durations in
//   nanoseconds. When a coupling enters a phase it is treated as an angular
//   rate of j_khz * 1e3 rad/s, so the dimensionless Ising time is
//   J[kHz] * t[us] * 1e-3 with no 2*pi factor. This matches the mean Ising
//   time products quoted for the preset chips.

constexpr double khz_to_rad_per_s(double j_khz) { return j_khz * 1e3; }
constexpr double us_to_s(double t_us) { return t_us * 1e-6; }
constexpr double ns_to_s(double t_ns) { return t_ns * 1e-9; }

struct QubitSpec {
  int id = 0;
  double t1_us = 0.0;
  double t2_us = 0.0;
};

struct Coupling {
  int a = 0;
  int b = 0;
  double j_khz = 0.0;
};

struct GateTimes {
  double single_ns = 0.0;
  double identity_ns = 0.0;
  double cnot_ns = 0.0;
  double cnot_error = 0.0;
  double readout_error = 0.0;
};

/// Immutable model of the quantum chip: qubit graph with always-on ZZ
/// couplings, coherence times, and gate durations.
struct DeviceModel {
  std::string name;
  std::vector<QubitSpec> qubits;
  std::vector<Coupling> couplings;
  GateTimes gates;

  int n_qubits() const { return static_cast<int>(qubits.size()); }

  /// Throws device_error with a field path on any invariant violation.
  void validate() const;

  /// Coupling in kHz between a and b, or 0 if they are not connected.
  double j_khz(int a, int b) const;
  bool coupled(int a, int b) const;
  std::vector<int> neighbors(int q) const;

  const QubitSpec& qubit(int id) const;
};

struct device_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses and validates a device-spec document. Unknown keys are rejected.
DeviceModel load_device(const nlohmann::json& doc);
DeviceModel load_device_file(const std::string& path);
nlohmann::json device_to_json(const DeviceModel& dev);

/// Bundled presets: "qx2-like", "qx14-like", "qx4-like".
/// Coupling values are representative of the 50-100 kHz range typical for
/// fixed-frequency transmon chips, not measured hardware numbers.
DeviceModel device_preset(const std::string& name);
bool is_device_preset(const std::string& name);
std::vector<std::string> device_preset_names();

/// (mean J * mean T1, mean J * mean T2), dimensionless (kHz * us * 1e-3).
std::pair<double, double> mean_ising_times(const DeviceModel& dev);

struct OptimalCoupling {
  double j_opt_khz = 0.0;   // 1/sqrt(t_1q * t_coh), in the kHz convention
  double min_error = 0.0;   // sqrt(t_1q / t_coh)
};

/// Order-of-magnitude optimum of the per-step error model J*t_1q + 1/(J*T).
OptimalCoupling optimal_coupling(double t_1q_s, double t_coh_s);

struct IdleBlock {
  int m = 0;             // nearest integer count of identity gates
  double residual_s = 0.0;  // t_phys - m * t_identity
};

IdleBlock idle_block_length(double t_phys_s, double t_identity_s);

}  // namespace daqsim
