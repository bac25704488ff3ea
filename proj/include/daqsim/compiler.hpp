// Copyright 2026 The daqsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "daqsim/device.hpp"
#include "daqsim/model.hpp"
#include "daqsim/statevector.hpp"

namespace daqsim {

/// Tag for serialization of single-qubit gates.
enum class GateTag { RX, RZ, H, X, Generic };

struct Moment {
  enum class Kind { Gate1Q, Cnot, Idle, Measure };
  Kind kind = Kind::Idle;
  int q0 = -1;       // gate qubit / control
  int q1 = -1;       // target (Cnot)
  Mat2 u{};          // Gate1Q
  double duration_s = 0.0;
  GateTag tag = GateTag::Generic;
  double angle = 0.0;

  static Moment gate1q(int q, const Mat2& u, double dur_s, GateTag tag,
                       double angle);
  static Moment cnot(int c, int t, double dur_s);
  static Moment idle(double dur_s);
  static Moment measure();
};

/// Timed sequence of moments. Single-qubit gates emitted as one parallel
/// layer carry the layer duration on the last gate of the layer and zero on
/// the others, so total_phys_time counts each layer once.
struct Schedule {
  int n_qubits = 0;
  std::vector<int> device_ids;  // device qubit per local index
  std::vector<Moment> moments;

  double total_phys_time_s() const;
  int device_id(int local) const {
    return device_ids.empty() ? local : device_ids[local];
  }
};

struct compile_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural checks: valid indices, nonnegative durations, measure last.
void validate_schedule(const Schedule& s);

/// One first-order Trotter step per repetition: Rx layer, Rz disorder layer
/// (when present), then each edge's ZZ rotation as CNOT * Rz * CNOT.
/// Durations are stamped from the device when given, zero otherwise.
Schedule trotterize_digital(const SpinModel& model, double t, int n_tr,
                            const DeviceModel* device = nullptr);

/// Same Trotter math with the ZZ layer realized as a single timed idle under
/// the device's always-on couplings.
Schedule trotterize_da(const SpinModel& model, const DeviceModel& device,
                       double t, int n_tr);

/// Optional second-order (symmetric) splitting, not the default.
Schedule trotterize_digital_symmetric(const SpinModel& model, double t,
                                      int n_tr,
                                      const DeviceModel* device = nullptr);

/// Expands a device-derived model to active + neighbors(active); spectators
/// keep their couplings to active spins but get h = 0.
SpinModel spectator_closure(const SpinModel& model, const DeviceModel& device,
                            const std::set<int>& active);

/// Three-qubit fragment realizing exp(-i theta Z_i Z_j) (up to global phase)
/// from the always-on interaction, with a spin echo on the spectator:
/// Idle(tau/2) X_k Idle(tau/2) X_k. Local qubit order: 0 = i, 1 = j,
/// 2 = spectator.
Schedule echo_zz_isolation(const DeviceModel& device, std::pair<int, int> pair,
                           int spectator, double theta,
                           double max_idle_s = 200e-6);

/// Standard digital QFT: H + controlled-phase ladder + qubit reversal, with
/// controlled phases decomposed into CNOTs and z rotations.
Schedule qft_digital(int n_qubits, const DeviceModel* device = nullptr);

/// Three-qubit QFT from single-qubit gates and echoed idles only. The triple
/// must be mutually coupled.
Schedule qft_da(const DeviceModel& device, const std::array<int, 3>& qubits);

/// Noiseless execution. Idle moments accumulate ZZ crosstalk phase over the
/// device edges among the schedule's qubits; gate moments do so only when
/// crosstalk_during_gates is set. device may be null for schedules without
/// idles when crosstalk_during_gates is off.
void apply_schedule_noiseless(StateVector& psi, const Schedule& s,
                              const DeviceModel* device,
                              bool crosstalk_during_gates = false);

/// Dense operator of a schedule (n_qubits <= 10), via basis columns.
Eigen::MatrixXcd schedule_unitary(const Schedule& s, const DeviceModel* device,
                                  bool crosstalk_during_gates = false);

/// Line-oriented text form, one moment per line.
std::string serialize_schedule(const Schedule& s);

}  // namespace daqsim
